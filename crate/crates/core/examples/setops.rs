//! Union and intersection of two temporal sets slice by slice, then KM type
//! reduction, z-weighted centroid averaging and the crisp output per season.

use txai::membership::{ConceptualLabel, LinguisticVariable, MembershipFunction};
use txai::plots::seasons_axis;
use txai::setops::{combine, defuzzify_all, defuzzify_slices, km_type_reduce, Grid, SetOp};
use txai::temporal::{ConditionalFrequency, TemporalSettings, Tt2fs};

fn main() -> txai::Result<()> {
    let var = LinguisticVariable::new(
        "Temperature",
        (-10.0, 40.0),
        vec![
            ConceptualLabel::new("Cold", MembershipFunction::gaussian(8.0, 4.0)?),
            ConceptualLabel::new("Warm", MembershipFunction::gaussian(24.0, 6.0)?),
        ],
    )?;
    let axis = seasons_axis();
    let settings = TemporalSettings::default();
    let cold = Tt2fs::build(&var, 0, &axis, &ConditionalFrequency::from_counts(&[17, 20, 12, 11, 8, 11, 2, 0, 3, 7, 15, 19]), &settings)?;
    let warm = Tt2fs::build(&var, 1, &axis, &ConditionalFrequency::from_counts(&[1, 0, 4, 6, 10, 15, 22, 21, 14, 8, 3, 1]), &settings)?;
    let grid = Grid::over(var.universe(), 201)?;

    // Where one set is absent in a season the intersection's lower bound vanishes
    // and its centroid interval widens to the whole universe.
    println!("crisp centroids per season: Cold {:.3?}", defuzzify_all(&cold, &grid)?);
    println!("                            Warm {:.3?}", defuzzify_all(&warm, &grid)?);
    for op in [SetOp::Union, SetOp::Intersection] {
        let combined = combine(&cold, &warm, op, &grid)?;
        println!("{op:?}:");
        for (q, per_level) in combined.iter().enumerate() {
            let km = km_type_reduce(&per_level[0])?;
            println!(
                "  {:<7} outer slice [{:.3}, {:.3}], crisp {:.3}",
                axis.interval(q).name,
                km.lower,
                km.upper,
                defuzzify_slices(per_level, &settings.zlevels)?
            );
        }
    }
    Ok(())
}
