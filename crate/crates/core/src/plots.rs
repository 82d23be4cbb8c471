//! Grid data for plotting: TMF surfaces per relation, conditional
//! distributions, and z-slice envelopes. Nothing is rendered here.

use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::inference::FuzzySystem;
use crate::learner::csv_writer;
use crate::membership::{ConceptualLabel, LinguisticVariable, MembershipFunction};
use crate::setops::{slices, Grid};
use crate::temporal::{
    ConditionalDistribution, ConditionalFrequency, FuzzyRelation, Interpolation, TemporalSettings, TimeAxis,
    TimeInterval, Tt2fs,
};

/// Monthly occurrences of "Cold" in the illustrative temperature example, January first.
pub const COLD_COUNTS: [u64; 12] = [17, 20, 12, 11, 8, 11, 2, 0, 3, 7, 15, 19];

const MONTHS: [&str; 12] = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"];

/// Twelve months in four seasons; Winter wraps from December into February.
pub fn seasons_axis() -> TimeAxis {
    TimeAxis::new(
        MONTHS.iter().map(|m| m.to_string()).collect(),
        vec![
            TimeInterval::new("Winter", [11, 0, 1]),
            TimeInterval::new("Spring", 2..5),
            TimeInterval::new("Summer", 5..8),
            TimeInterval::new("Autumn", 8..11),
        ],
    )
    .expect("static axis is valid")
}

/// Temperature on [-10, 40] with a single label, Cold = gaussian(8, 4).
pub fn cold_variable() -> LinguisticVariable {
    let mf = MembershipFunction::gaussian(8.0, 4.0).expect("static parameters");
    LinguisticVariable::new("Temperature", (-10.0, 40.0), vec![ConceptualLabel::new("Cold", mf)])
        .expect("static variable is valid")
}

pub fn cold_set(settings: &TemporalSettings) -> Result<Tt2fs> {
    Tt2fs::build(&cold_variable(), 0, &seasons_axis(), &ConditionalFrequency::from_counts(&COLD_COUNTS), settings)
}

/// `relation,t,x,tmf` over a `points x points` grid of time and temperature, for every relation.
pub fn write_relation_surfaces(path: &Path, header: &str, points: usize) -> Result<()> {
    let set = cold_set(&TemporalSettings::default())?;
    let (lo, hi) = set.universe();
    let xs = Grid::uniform(lo, hi, points)?;
    let ts = Grid::uniform(0.0, set.axis().len() as f64, points)?;
    let mut w = csv_writer(path, header)?;
    w.write_record(["relation", "t", "x", "tmf"])?;
    for rel in FuzzyRelation::ALL {
        for &t in ts.xs() {
            for &x in xs.xs() {
                let v = set.eval_tmf_with(x, t, rel)?;
                w.write_record([rel.to_string(), t.to_string(), x.to_string(), v.to_string()])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// `t,g,linear,monotone_cubic`; `g` is filled at the discrete points only.
pub fn write_distribution_curves(path: &Path, header: &str, points: usize) -> Result<()> {
    let freq = ConditionalFrequency::from_counts(&COLD_COUNTS);
    let linear = ConditionalDistribution::new(freq.g.clone(), Interpolation::Linear)?;
    let cubic = ConditionalDistribution::new(freq.g.clone(), Interpolation::MonotoneCubic)?;
    let n = freq.g.len() as f64;
    let mut w = csv_writer(path, header)?;
    w.write_record(["t", "g", "linear", "monotone_cubic"])?;
    for &t in Grid::uniform(0.0, n, points)?.xs() {
        let g = if t.fract() == 0.0 && t < n { freq.g[t as usize].to_string() } else { String::new() };
        w.write_record([t.to_string(), g, linear.eval(t)?.to_string(), cubic.eval(t)?.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `variable,label,interval,zlevel,x,lower,upper,primary` for every set of the system.
pub fn write_envelopes<'a>(sets: impl IntoIterator<Item = &'a Tt2fs>, path: &Path, header: &str, points: usize) -> Result<()> {
    let mut w = csv_writer(path, header)?;
    w.write_record(["variable", "label", "interval", "zlevel", "x", "lower", "upper", "primary"])?;
    for set in sets {
        let grid = Grid::over(set.universe(), points)?;
        for (q, per_level) in slices(set, &grid)?.iter().enumerate() {
            let name = &set.axis().interval(q).name;
            for s in per_level {
                for (k, &x) in s.xs.iter().enumerate() {
                    w.write_record([
                        set.variable().to_string(),
                        set.label().to_string(),
                        name.clone(),
                        s.zlevel.to_string(),
                        x.to_string(),
                        s.lower[k].to_string(),
                        s.upper[k].to_string(),
                        set.mf().grade(x).to_string(),
                    ])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the illustrative grids into `dir` and, given a system, its envelopes too.
pub fn dump_plots(dir: &Path, header: &str, points: usize, system: Option<&FuzzySystem>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut out = |name: &str| {
        let p = dir.join(name);
        written.push(p.clone());
        p
    };
    write_relation_surfaces(&out("relation_surfaces.csv"), header, points.min(101))?;
    write_distribution_curves(&out("cold_distribution.csv"), header, points.max(13))?;
    let cold = cold_set(&TemporalSettings::default())?;
    write_envelopes([&cold], &out("cold_envelopes.csv"), header, points)?;
    if let Some(system) = system {
        write_envelopes(system.sets().iter().flatten(), &out("envelopes.csv"), header, points)?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cold_set_winter_band_holds_the_winter_months() {
        let set = cold_set(&TemporalSettings::default()).unwrap();
        // Winter g = {0.95, 0.85, 1.0}; the outer band spans their min and max.
        let b = set.band(0, 0);
        assert_eq!((b.lower, b.upper), (0.85, 1.0));
        assert_eq!(set.axis().interval_of(11), 0);
    }

    #[test]
    fn writes_all_grids() {
        let dir = tempfile::tempdir().unwrap();
        let files = dump_plots(dir.path(), "seed=1", 11, None).unwrap();
        assert_eq!(files.len(), 3);
        let text = std::fs::read_to_string(&files[0]).unwrap();
        assert!(text.starts_with("# seed=1\nrelation,t,x,tmf\n"));
        assert_eq!(text.lines().count(), 2 + FuzzyRelation::ALL.len() * 11 * 11);
        let dist = std::fs::read_to_string(&files[1]).unwrap();
        assert!(dist.lines().nth(2).unwrap().starts_with("0,0.85,0.85,0.85"));
    }
}
