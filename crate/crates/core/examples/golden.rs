//! Replays the worked two-rule-variable Morning example and prints each quantity.

fn main() -> txai::Result<()> {
    let report = txai::golden::replay()?;
    for r in &report.rules {
        println!("{r}");
    }
    for c in &report.checks {
        let mark = if c.passed() { "ok " } else { "BAD" };
        println!("{mark} {:<22} expected {:>6} got {:.4}", c.quantity, c.expected, c.actual);
    }
    println!("predicted {:?} via rule {:?}", report.predicted_label, report.winner.map(|w| w + 1));
    report.into_result().map(|_| ())
}
