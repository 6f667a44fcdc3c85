use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jets::Point;

/// Axis-aligned spacetime box `[t, x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBox(pub [(f64, f64); 4]);

impl FromStr for SampleBox {
    type Err = String;

    /// `tmin:tmax,xmin:xmax,ymin:ymax,zmin:zmax`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(format!("box needs four ranges, got {}", parts.len()));
        }
        let mut out = [(0.0, 0.0); 4];
        for (slot, part) in out.iter_mut().zip(parts) {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| format!("range `{part}` is not min:max"))?;
            let lo: f64 = lo.trim().parse().map_err(|_| format!("bad number `{lo}`"))?;
            let hi: f64 = hi.trim().parse().map_err(|_| format!("bad number `{hi}`"))?;
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(format!("range `{part}` must satisfy min <= max"));
            }
            *slot = (lo, hi);
        }
        Ok(SampleBox(out))
    }
}

impl fmt::Display for SampleBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        f.write_str(&parts.join(","))
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// `n` points of the Halton sequence in bases 2, 3, 5, 7 with a seeded
/// Cranley-Patterson rotation, mapped into `bx`.
pub fn halton_points(bx: &SampleBox, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 4] = std::array::from_fn(|_| rng.gen::<f64>());
    const BASES: [u64; 4] = [2, 3, 5, 7];
    (1..=n as u64)
        .map(|i| {
            std::array::from_fn(|d| {
                let u = (radical_inverse(i, BASES[d]) + shift[d]).fract();
                let (lo, hi) = bx.0[d];
                lo + u * (hi - lo)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_round_trip() {
        let b: SampleBox = "0:2,-1.5:1.5,-1:1,0:6.5".parse().unwrap();
        assert_eq!(b.0[1], (-1.5, 1.5));
        assert_eq!(b.to_string().parse::<SampleBox>().unwrap(), b);
        assert!("0:2,1:0,0:1,0:1".parse::<SampleBox>().is_err());
        assert!("0:2".parse::<SampleBox>().is_err());
    }

    #[test]
    fn deterministic_and_inside() {
        let b = SampleBox([(0.0, 2.0), (-1.0, 1.0), (-1.0, 1.0), (3.0, 4.0)]);
        let a = halton_points(&b, 50, 42);
        assert_eq!(a, halton_points(&b, 50, 42));
        assert_ne!(a, halton_points(&b, 50, 43));
        for p in &a {
            for d in 0..4 {
                assert!(p[d] >= b.0[d].0 && p[d] <= b.0[d].1);
            }
        }
        assert_eq!(radical_inverse(3, 2), 0.75);
    }
}
