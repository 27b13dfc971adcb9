//! One-dimensional minimization on a closed interval: a dense grid scan
//! followed by golden-section refinement inside the best grid cell.

use crate::types::Interval;

/// 1/φ
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGolden {
    /// Number of grid points, endpoints included.
    pub grid_points: usize,
    /// Golden-section stops once the bracket is narrower than this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for GridGolden {
    fn default() -> Self {
        GridGolden {
            grid_points: 2001,
            tolerance: 1e-12,
            max_iterations: 200,
        }
    }
}

/// Location and value of a minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

impl GridGolden {
    /// Minimizes `f` over `domain`. `extra` points (kinks, known critical
    /// points) are evaluated alongside the grid when they fall inside it.
    pub fn minimize<F>(&self, f: F, domain: Interval, extra: &[f64]) -> Minimum
    where
        F: Fn(f64) -> f64,
    {
        let mut best = Minimum {
            x: domain.lo,
            value: f(domain.lo),
        };
        if domain.width() <= 0.0 {
            return best;
        }
        let consider = |x: f64, best: &mut Minimum| {
            let value = f(x);
            if value < best.value {
                *best = Minimum { x, value };
            }
        };

        let n = self.grid_points.max(2);
        let step = domain.width() / (n - 1) as f64;
        let mut best_index = 0;
        for k in 1..n {
            let x = if k == n - 1 {
                domain.hi
            } else {
                domain.lo + step * k as f64
            };
            let before = best.value;
            consider(x, &mut best);
            if best.value < before {
                best_index = k;
            }
        }
        for &x in extra.iter().filter(|x| domain.contains(**x)) {
            consider(x, &mut best);
        }

        let lo = domain.lo + step * best_index.saturating_sub(1) as f64;
        let hi = (domain.lo + step * (best_index + 1) as f64).min(domain.hi);
        let refined = self.golden(&f, lo, hi);
        if refined.value < best.value {
            best = refined;
        }
        best
    }

    fn golden<F: Fn(f64) -> f64>(&self, f: &F, mut a: f64, mut b: f64) -> Minimum {
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = f(c);
        let mut fd = f(d);
        for _ in 0..self.max_iterations {
            if (b - a).abs() <= self.tolerance {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = f(d);
            }
        }
        if fc < fd {
            Minimum { x: c, value: fc }
        } else {
            Minimum { x: d, value: fd }
        }
    }
}
