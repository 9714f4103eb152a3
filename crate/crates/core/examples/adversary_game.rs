//! The query game behind the lower bound: an adaptive oracle punishes any
//! learner that stops before asking every query.

use kident::adversary::{promise_bn, promise_mn, run_game, strategy_zoo, AdversaryPolicy};

fn main() -> kident::Result<()> {
    for (mode, inst) in [("mn", promise_mn(4)?), ("bn", promise_bn(4)?)] {
        println!("{mode}: {} queries, critical {}", inst.query_space(), inst.critical_query());
        for mut s in strategy_zoo(&inst) {
            for policy in [AdversaryPolicy::TruthfulG1, AdversaryPolicy::LateError] {
                let t = run_game(s.as_mut(), &inst, policy)?;
                println!(
                    "  {:<18} {:<11} {:>2} queries  decided {:<14} truth {:<14} fooled {:<5} justified {}",
                    t.strategy,
                    format!("{policy:?}"),
                    t.queries_used,
                    format!("{:?}", t.decision),
                    format!("{:?}", t.truth),
                    t.fooled,
                    t.justified
                );
            }
        }
    }
    Ok(())
}
