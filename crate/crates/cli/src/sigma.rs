//! Cell conductivity layouts for the heterogeneity runs.
//!
//! Each layout assigns one conductivity per cell, in cell id order
//! (row-major from the lower-left corner). The frame conductivity is not
//! touched here.

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaDistribution {
    /// Homogeneous: every cell at the base value.
    Normal,
    /// Cells with odd `cx + cy` scaled by alpha.
    Checkboard,
    /// A centered 4x4 cell block scaled by alpha.
    Capsule,
    /// Every cell at `alpha * (base + U[0, 1e-3))`, seeded.
    Random,
}

/// Width of the uniform jitter band in the random layout.
const RANDOM_JITTER: f64 = 1e-3;

impl SigmaDistribution {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" => Ok(SigmaDistribution::Normal),
            "checkboard" | "checkerboard" => Ok(SigmaDistribution::Checkboard),
            "capsule" => Ok(SigmaDistribution::Capsule),
            "random" => Ok(SigmaDistribution::Random),
            other => bail!(
                "unknown sigma distribution {other:?} (expected normal, checkboard, capsule, or random)"
            ),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SigmaDistribution::Normal => "normal",
            SigmaDistribution::Checkboard => "checkboard",
            SigmaDistribution::Capsule => "capsule",
            SigmaDistribution::Random => "random",
        }
    }

    /// Whether alpha changes the layout at all.
    pub fn alpha_dependent(self) -> bool {
        self != SigmaDistribution::Normal
    }
}

pub fn cell_sigmas(
    dist: SigmaDistribution,
    nx: usize,
    ny: usize,
    base: f64,
    alpha: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    if nx == 0 || ny == 0 {
        bail!("empty cell grid {nx}x{ny}");
    }
    if base <= 0.0 || alpha <= 0.0 {
        bail!("conductivities must stay positive (base {base}, alpha {alpha})");
    }
    let n = nx * ny;
    Ok(match dist {
        SigmaDistribution::Normal => vec![base; n],
        SigmaDistribution::Checkboard => (0..n)
            .map(|i| {
                let (cx, cy) = (i % nx, i / nx);
                if (cx + cy) % 2 == 1 {
                    alpha * base
                } else {
                    base
                }
            })
            .collect(),
        SigmaDistribution::Capsule => {
            if nx < 4 || ny < 4 {
                bail!("capsule layout needs at least a 4x4 cell grid, got {nx}x{ny}");
            }
            let (x0, y0) = ((nx - 4) / 2, (ny - 4) / 2);
            (0..n)
                .map(|i| {
                    let (cx, cy) = (i % nx, i / nx);
                    if (x0..x0 + 4).contains(&cx) && (y0..y0 + 4).contains(&cy) {
                        alpha * base
                    } else {
                        base
                    }
                })
                .collect()
        }
        SigmaDistribution::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| alpha * (base + rng.gen_range(0.0..RANDOM_JITTER)))
                .collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: f64 = 3e-3;

    #[test]
    fn normal_is_flat_and_alpha_free() {
        let a = cell_sigmas(SigmaDistribution::Normal, 3, 2, BASE, 1.0, 0).unwrap();
        let b = cell_sigmas(SigmaDistribution::Normal, 3, 2, BASE, 1e-4, 0).unwrap();
        assert_eq!(a, vec![BASE; 6]);
        assert_eq!(a, b);
    }

    #[test]
    fn checkboard_alternates_within_rows_and_columns() {
        let s = cell_sigmas(SigmaDistribution::Checkboard, 4, 3, BASE, 0.1, 0).unwrap();
        // row 0: base, a*base, base, a*base; row 1 starts on the scaled side
        assert_eq!(s[0], BASE);
        assert_eq!(s[1], 0.1 * BASE);
        assert_eq!(s[4], 0.1 * BASE);
        assert_eq!(s[5], BASE);
        let scaled = s.iter().filter(|&&v| v < BASE).count();
        assert_eq!(scaled, 6);
    }

    #[test]
    fn capsule_marks_the_centered_block() {
        let s = cell_sigmas(SigmaDistribution::Capsule, 8, 8, BASE, 1e-2, 0).unwrap();
        let scaled: Vec<usize> = (0..64).filter(|&i| s[i] < BASE).collect();
        assert_eq!(scaled.len(), 16);
        for &i in &scaled {
            let (cx, cy) = (i % 8, i / 8);
            assert!((2..6).contains(&cx) && (2..6).contains(&cy));
        }
    }

    #[test]
    fn capsule_rejects_small_grids() {
        assert!(cell_sigmas(SigmaDistribution::Capsule, 3, 8, BASE, 0.5, 0).is_err());
        assert!(cell_sigmas(SigmaDistribution::Capsule, 8, 3, BASE, 0.5, 0).is_err());
    }

    #[test]
    fn random_is_seed_deterministic_and_banded() {
        let a = cell_sigmas(SigmaDistribution::Random, 8, 8, BASE, 1e-3, 9).unwrap();
        let b = cell_sigmas(SigmaDistribution::Random, 8, 8, BASE, 1e-3, 9).unwrap();
        let c = cell_sigmas(SigmaDistribution::Random, 8, 8, BASE, 1e-3, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        for &v in &a {
            assert!(v >= 1e-3 * BASE && v < 1e-3 * (BASE + RANDOM_JITTER));
        }
    }

    #[test]
    fn nonpositive_inputs_are_rejected() {
        assert!(cell_sigmas(SigmaDistribution::Normal, 2, 2, 0.0, 1.0, 0).is_err());
        assert!(cell_sigmas(SigmaDistribution::Checkboard, 2, 2, BASE, 0.0, 0).is_err());
        assert!(cell_sigmas(SigmaDistribution::Normal, 0, 2, BASE, 1.0, 0).is_err());
    }
}
