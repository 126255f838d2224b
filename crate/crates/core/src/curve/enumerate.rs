use num_traits::Zero;

use crate::curve::TestCurve;
use crate::error::{Error, Result};
use crate::poly::{rational, Rational, Ring, UnivariatePoly};

/// Monomial curve search space: every slot gets `c·s^e` with
/// `1 ≤ e ≤ max_exponent` and `c` from `coefficients`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveConfig {
    pub max_exponent: u32,
    pub coefficients: Vec<Rational>,
    /// In a doubled ring, give the first variable (the parameter) and its
    /// primed copy the same component.
    pub share_parameter: bool,
}

impl CurveConfig {
    /// Coefficients `{1, 2}`, shared parameter.
    pub fn new(max_exponent: u32) -> CurveConfig {
        CurveConfig {
            max_exponent,
            coefficients: vec![rational(1), rational(2)],
            share_parameter: true,
        }
    }
}

/// Deterministic stream ordered by total slot degree, then exponent vector
/// (lexicographic), then coefficient choice (lexicographic, in the order of
/// the sorted coefficient set). Each degree layer is generated on demand.
#[derive(Debug, Clone)]
pub struct CurveStream {
    ring: Ring,
    /// Ring variables fed by each slot.
    slots: Vec<Vec<usize>>,
    max_exponent: u32,
    coefficients: Vec<Rational>,
    degree: u32,
    layer: Vec<Vec<u32>>,
    layer_pos: usize,
    coef_idx: Vec<usize>,
}

pub fn enumerate_test_curves(ring: &Ring, config: &CurveConfig) -> Result<CurveStream> {
    if config.max_exponent == 0 {
        return Err(Error::InvalidCurve(
            "max_exponent must be at least 1".into(),
        ));
    }
    if config.coefficients.is_empty() || config.coefficients.iter().any(Zero::is_zero) {
        return Err(Error::EmptyCoefficientSet);
    }
    let mut coefficients = config.coefficients.clone();
    coefficients.sort();
    coefficients.dedup();
    let n = ring.arity();
    let shared = match ring.half() {
        Some(h) if config.share_parameter && h > 0 => Some(h),
        _ => None,
    };
    let slots: Vec<Vec<usize>> = (0..n)
        .filter(|&i| shared != Some(i))
        .map(|i| match shared {
            Some(h) if i == 0 => vec![0, h],
            _ => vec![i],
        })
        .collect();
    let k = slots.len();
    Ok(CurveStream {
        ring: ring.clone(),
        slots,
        max_exponent: config.max_exponent,
        coefficients,
        degree: k as u32 - 1,
        layer: Vec::new(),
        layer_pos: 0,
        coef_idx: vec![0; k],
    })
}

/// All vectors of `parts` integers in `1..=max` summing to `total`, in
/// lexicographic order.
fn compositions(total: u32, parts: usize, max: u32) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let rest = parts as u32 - 1;
        for e in 1..=max {
            if e + rest > total {
                break;
            }
            if total - e > rest * max {
                continue;
            }
            prefix.push(e);
            go(total - e, parts - 1, max, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, max, &mut Vec::new(), &mut out);
    out
}

impl CurveStream {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Number of independent slots.
    pub fn slots(&self) -> usize {
        self.slots.len()
    }

    /// Total number of curves the stream yields from the start.
    pub fn total_len(&self) -> u128 {
        let per_slot = self.max_exponent as u128 * self.coefficients.len() as u128;
        per_slot.pow(self.slots.len() as u32)
    }

    fn build(&self, exps: &[u32]) -> TestCurve {
        let mut comps = vec![UnivariatePoly::zero(); self.ring.arity()];
        for (s, vars) in self.slots.iter().enumerate() {
            let c = UnivariatePoly::monomial(self.coefficients[self.coef_idx[s]].clone(), exps[s]);
            for &v in vars {
                comps[v] = c.clone();
            }
        }
        TestCurve {
            ring: self.ring.clone(),
            components: comps,
        }
    }
}

impl Iterator for CurveStream {
    type Item = TestCurve;

    fn next(&mut self) -> Option<TestCurve> {
        let k = self.slots.len();
        if k == 0 {
            return None;
        }
        while self.layer_pos >= self.layer.len() {
            self.degree += 1;
            if self.degree > k as u32 * self.max_exponent {
                return None;
            }
            self.layer = compositions(self.degree, k, self.max_exponent);
            self.layer_pos = 0;
            self.coef_idx = vec![0; k];
        }
        let curve = self.build(&self.layer[self.layer_pos]);
        // advance the coefficient odometer, rightmost slot fastest
        let base = self.coefficients.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.layer_pos += 1;
                break;
            }
            i -= 1;
            self.coef_idx[i] += 1;
            if self.coef_idx[i] < base {
                break;
            }
            self.coef_idx[i] = 0;
        }
        Some(curve)
    }
}
