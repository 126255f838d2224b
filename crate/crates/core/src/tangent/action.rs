use std::sync::{Arc, OnceLock};

use crate::double::MatrixGerm;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::registry::Registry;

/// Infinitesimal action of a matrix group on germs: the module generators
/// of the orbit tangent space other than the partial derivatives.
pub trait GroupAction: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether results live in symmetric matrices.
    fn symmetric(&self) -> bool;

    fn orbit_generators(&self, f: &MatrixGerm) -> Result<Vec<MatrixGerm>>;
}

/// Independent row and column operations on `n × p` matrices.
pub struct General;

/// `X F Xᵀ` on symmetric matrices, linearized as `E_ab F + F E_abᵀ`.
pub struct SymmetricCongruence;

impl GroupAction for General {
    fn name(&self) -> &'static str {
        "general"
    }

    fn symmetric(&self) -> bool {
        false
    }

    /// `R_il` has row `l` equal to row `i` of `F`; `C_jm` has column `m`
    /// equal to column `j` of `F`.
    fn orbit_generators(&self, f: &MatrixGerm) -> Result<Vec<MatrixGerm>> {
        let (n, p) = f.shape();
        let ring = f.ring();
        let zero = Polynomial::zero(ring);
        let mut out = Vec::with_capacity(n * n + p * p);
        for i in 0..n {
            for l in 0..n {
                let entries = (0..n)
                    .flat_map(|r| (0..p).map(move |c| (r, c)))
                    .map(|(r, c)| {
                        if r == l {
                            f.entry(i, c).clone()
                        } else {
                            zero.clone()
                        }
                    })
                    .collect();
                out.push(MatrixGerm::new(ring, n, p, entries, false)?);
            }
        }
        for j in 0..p {
            for m in 0..p {
                let entries = (0..n)
                    .flat_map(|r| (0..p).map(move |c| (r, c)))
                    .map(|(r, c)| {
                        if c == m {
                            f.entry(r, j).clone()
                        } else {
                            zero.clone()
                        }
                    })
                    .collect();
                out.push(MatrixGerm::new(ring, n, p, entries, false)?);
            }
        }
        Ok(out)
    }
}

impl GroupAction for SymmetricCongruence {
    fn name(&self) -> &'static str {
        "symmetric-congruence"
    }

    fn symmetric(&self) -> bool {
        true
    }

    fn orbit_generators(&self, f: &MatrixGerm) -> Result<Vec<MatrixGerm>> {
        if !f.is_symmetric() {
            return Err(Error::SymmetryMismatch(
                "congruence action needs a symmetric germ".into(),
            ));
        }
        let n = f.rows();
        let ring = f.ring();
        let zero = Polynomial::zero(ring);
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                // (E_ab F)_ij = δ_ia F_bj, (F E_abᵀ)_ij = F_ib δ_ja
                let mut entries = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        let mut e = zero.clone();
                        if i == a {
                            e = &e + f.entry(b, j);
                        }
                        if j == a {
                            e = &e + f.entry(i, b);
                        }
                        entries.push(e);
                    }
                }
                out.push(MatrixGerm::new(ring, n, n, entries, true)?);
            }
        }
        Ok(out)
    }
}

fn registry() -> &'static Registry<dyn GroupAction> {
    static REG: OnceLock<Registry<dyn GroupAction>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn GroupAction> = Registry::new("group action");
        r.register("general", Arc::new(General));
        r.register("symmetric-congruence", Arc::new(SymmetricCongruence));
        r
    })
}

/// Looks up a registered action by name.
pub fn action(name: &str) -> Result<Arc<dyn GroupAction>> {
    registry().get(name)
}

pub fn action_names() -> Vec<&'static str> {
    registry().names()
}

/// The congruence action for symmetric germs, the general one otherwise.
pub fn default_action(f: &MatrixGerm) -> Arc<dyn GroupAction> {
    let name = if f.is_symmetric() {
        "symmetric-congruence"
    } else {
        "general"
    };
    action(name).expect("built-in actions are registered")
}

/// Partial derivatives of `F` followed by the action's orbit generators.
pub fn tangent_generators(f: &MatrixGerm, action: &dyn GroupAction) -> Result<Vec<MatrixGerm>> {
    let mut out: Vec<MatrixGerm> = f
        .ring()
        .names()
        .iter()
        .map(|v| f.partial_derivative(v))
        .collect::<Result<_>>()?;
    if !action.symmetric() {
        out = out
            .into_iter()
            .map(|m| MatrixGerm::new(m.ring(), m.rows(), m.cols(), m.entries().to_vec(), false))
            .collect::<Result<_>>()?;
    }
    out.extend(action.orbit_generators(f)?);
    Ok(out)
}
