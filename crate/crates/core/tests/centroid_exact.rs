//! Centroid averaging and type-1 centroids against exact rational arithmetic.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use txai::bounds::Bounds;
use txai::setops::{centroid_average, t1_centroid};
use txai::temporal::ZLevels;

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

/// Multiples of 1/64 keep every input exactly representable.
fn dyadic<R: Rng>(rng: &mut R, lo: i32, hi: i32) -> f64 {
    f64::from(rng.gen_range(lo..=hi)) / 64.0
}

#[test]
fn centroid_average_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..500 {
        let count = rng.gen_range(1..=6);
        let mut z: Vec<f64> = (0..count).map(|_| dyadic(&mut rng, 1, 64)).collect();
        z.sort_by(f64::total_cmp);
        z.dedup();
        let zl = ZLevels::new(z.clone()).unwrap();
        let pairs: Vec<Bounds> = z
            .iter()
            .map(|_| {
                let a = dyadic(&mut rng, -640, 640);
                let b = a + dyadic(&mut rng, 0, 320);
                Bounds { lower: a, upper: b }
            })
            .collect();
        let got = centroid_average(&pairs, &zl).unwrap();
        let zsum = z.iter().fold(BigRational::from_integer(0.into()), |s, &v| s + exact(v));
        let side = |f: fn(&Bounds) -> f64| {
            let num = z.iter().zip(&pairs).fold(BigRational::from_integer(0.into()), |s, (&zv, p)| s + exact(zv) * exact(f(p)));
            (num / zsum.clone()).to_f64().unwrap()
        };
        let (l, r) = (side(|p| p.lower), side(|p| p.upper));
        assert!((got.lower - l).abs() <= 1e-12 * l.abs().max(1.0), "{} vs {l}", got.lower);
        assert!((got.upper - r).abs() <= 1e-12 * r.abs().max(1.0), "{} vs {r}", got.upper);
    }
}

#[test]
fn t1_centroid_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..300 {
        let b = rng.gen_range(1..=40);
        let xs: Vec<f64> = (0..b).map(|k| k as f64 / 4.0 - 3.0).collect();
        let mu: Vec<f64> = (0..b).map(|_| dyadic(&mut rng, 0, 64)).collect();
        if mu.iter().all(|&m| m == 0.0) {
            assert!(t1_centroid(&xs, &mu).is_err());
            continue;
        }
        let zero = || BigRational::from_integer(0.into());
        let num = xs.iter().zip(&mu).fold(zero(), |s, (&x, &m)| s + exact(x) * exact(m));
        let den = mu.iter().fold(zero(), |s, &m| s + exact(m));
        let want = (num / den).to_f64().unwrap();
        let got = t1_centroid(&xs, &mu).unwrap();
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
}
