//! Rule learning on a separable fixture: the class is Output2 exactly when
//! Feature1 is above 7, so a good base should hold "Feature1 is High".

use txai::inference::Mode;
use txai::learner::{fit_model, GaConfig};
use txai::synthetic::separable_problem;

fn main() -> txai::Result<()> {
    let problem = separable_problem(600, 11);
    let fit = fit_model(&problem, &GaConfig::default(), Mode::Txai, 5, 7)?;
    print!("{}", fit.model.render());
    println!("validation balanced accuracy {:.4}", fit.validation.balanced_accuracy);
    for t in &fit.traces {
        let trace: Vec<String> = t.best_per_generation.iter().map(|v| format!("{v:.3}")).collect();
        println!("{:<8} {}", t.base, trace.join(" "));
    }
    Ok(())
}
