//! The monthly "Cold" example: conditional relative frequency from counts,
//! interpolation, the five relations, and the z-slice bands per season.

use txai::plots::{cold_set, COLD_COUNTS};
use txai::temporal::{ConditionalDistribution, ConditionalFrequency, FuzzyRelation, Interpolation, TemporalSettings};

fn main() -> txai::Result<()> {
    let freq = ConditionalFrequency::from_counts(&COLD_COUNTS);
    println!("g = {:?}", freq.g);
    let linear = ConditionalDistribution::new(freq.g.clone(), Interpolation::Linear)?;
    let cubic = ConditionalDistribution::new(freq.g.clone(), Interpolation::MonotoneCubic)?;
    for t in [0.5, 6.5, 11.5] {
        println!("f({t}) linear {:.4} monotone cubic {:.4}", linear.eval(t)?, cubic.eval(t)?);
    }

    let set = cold_set(&TemporalSettings::default())?;
    println!("\nTMF of 12 degrees in mid-January and mid-July:");
    for rel in FuzzyRelation::ALL {
        println!("  {:<16} {:.4} {:.4}", rel.to_string(), set.eval_tmf_with(12.0, 0.5, rel)?, set.eval_tmf_with(12.0, 6.5, rel)?);
    }

    println!("\nbands per season (outermost and innermost z-level):");
    let top = set.zlevels().top();
    for (q, iv) in set.axis().intervals().iter().enumerate() {
        let (outer, inner) = (set.band(q, 0), set.band(q, top));
        println!("  {:<7} [{:.3}, {:.3}] [{:.3}, {:.3}]", iv.name, outer.lower, outer.upper, inner.lower, inner.upper);
    }
    let env = set.envelope(0, 0, 10.0)?;
    println!("Winter envelope at 10 degrees: [{:.4}, {:.4}]", env.lower, env.upper);
    Ok(())
}
