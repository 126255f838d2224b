//! Doubles `h_D(z, z') = h(z) − h(z')`, doubled ideals, unfoldings and the
//! diagonal ideal.

mod germ;

use std::fmt;

pub use germ::MatrixGerm;
pub(crate) use germ::{positions, scaled_unit};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::{same_ring, Polynomial, Ring, RingContext};

/// Default parameter symbol of unfoldings.
pub const DEFAULT_PARAMETER: &str = "t";

/// The doubled extension of an unprimed ring.
pub fn doubled_ring(base: &Ring) -> Result<Ring> {
    if base.is_doubled() || base.names().iter().any(|n| n.ends_with('\'')) {
        return Err(Error::NoDoubledExtension(base.to_string()));
    }
    RingContext::doubled_of(base)
}

/// `p(z) − p(z')` in the doubled extension of `p`'s ring.
pub fn double_of(p: &Polynomial) -> Result<Polynomial> {
    let d = doubled_ring(p.ring())?;
    double_into(p, &d)
}

/// `p(z) − p(z')` in a given doubled ring, which must extend `p`'s ring.
pub fn double_into(p: &Polynomial, doubled: &Ring) -> Result<Polynomial> {
    if !p.ring().is_doubled_by(doubled) {
        return Err(Error::NoDoubledExtension(format!(
            "{} is not the double of {}",
            doubled,
            p.ring()
        )));
    }
    let h = p.ring().arity();
    let unprimed: Vec<usize> = (0..h).collect();
    let primed: Vec<usize> = (h..2 * h).collect();
    Ok(&p.embed(doubled, &unprimed) - &p.embed(doubled, &primed))
}

/// `I_D` of a list of components, with the components kept for reporting.
#[derive(Debug, Clone)]
pub struct DoubledIdeal {
    source: String,
    components: Vec<Polynomial>,
    ideal: Ideal,
}

impl DoubledIdeal {
    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    /// Short description of the doubled map.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn generators(&self) -> &[Polynomial] {
        self.ideal.generators()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn into_ideal(self) -> Ideal {
        self.ideal
    }

    pub fn is_zero(&self) -> bool {
        self.ideal.is_zero()
    }

    /// Generators with the primed parameter identified with the unprimed
    /// one; generators that become zero (such as `t − t'`) are dropped.
    pub fn identified_view(&self, parameter: &str) -> Result<Vec<Polynomial>> {
        let ring = self.ring();
        let t = Polynomial::variable(ring, parameter)?;
        let primed = format!("{parameter}'");
        let ti = ring
            .index_of(&primed)
            .ok_or_else(|| Error::UnknownSymbol(primed.clone()))?;
        let images: Vec<Polynomial> = (0..ring.arity())
            .map(|i| {
                if i == ti {
                    t.clone()
                } else {
                    Polynomial::var_index(ring, i)
                }
            })
            .collect();
        let mut out = Vec::new();
        for g in self.generators() {
            let v = g.compose(&images)?;
            if !v.is_zero() {
                out.push(v);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for DoubledIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_D({}) = {}", self.source, self.ideal)
    }
}

/// `I_D` generated by the doubles of `components`; zero doubles are dropped.
pub fn double_ideal(components: &[Polynomial]) -> Result<DoubledIdeal> {
    let first = components.first().ok_or(Error::EmptyComponents)?;
    let doubled = doubled_ring(first.ring())?;
    double_ideal_in(components, &doubled, "h")
}

pub(crate) fn double_ideal_in(
    components: &[Polynomial],
    doubled: &Ring,
    source: &str,
) -> Result<DoubledIdeal> {
    if components.is_empty() {
        return Err(Error::EmptyComponents);
    }
    let gens = components
        .iter()
        .map(|c| double_into(c, doubled))
        .collect::<Result<Vec<_>>>()?;
    Ok(DoubledIdeal {
        source: source.to_string(),
        components: components.to_vec(),
        ideal: Ideal::new(doubled, gens)?,
    })
}

/// `⟨v − v'⟩` over every unprimed variable of a doubled ring.
pub fn diagonal_ideal(ring: &Ring) -> Result<Ideal> {
    let h = ring
        .half()
        .ok_or_else(|| Error::NotDoubled(ring.to_string()))?;
    let gens =
        (0..h).map(|i| &Polynomial::var_index(ring, i) - &Polynomial::var_index(ring, i + h));
    Ideal::new(ring, gens)
}

/// `F̃ = (t, F + t·θ)` with its rings.
#[derive(Debug, Clone)]
pub struct Unfolding {
    parameter: String,
    base: MatrixGerm,
    direction: MatrixGerm,
    extended: Ring,
    doubled: Ring,
    total: MatrixGerm,
}

pub fn build_unfolding(f: &MatrixGerm, theta: &MatrixGerm, t: &str) -> Result<Unfolding> {
    if f.shape() != theta.shape() {
        return Err(Error::ShapeMismatch(format!(
            "germ is {}×{}, direction is {}×{}",
            f.rows(),
            f.cols(),
            theta.rows(),
            theta.cols()
        )));
    }
    if !same_ring(f.ring(), theta.ring()) {
        return Err(Error::RingMismatch(format!(
            "{} vs {}",
            f.ring(),
            theta.ring()
        )));
    }
    if f.is_symmetric() && !theta.is_symmetric() {
        return Err(Error::SymmetryMismatch(
            "symmetric germ needs a symmetric direction".into(),
        ));
    }
    let extended = RingContext::with_parameter(f.ring(), t)?;
    let doubled = doubled_ring(&extended)?;
    let tp = Polynomial::variable(&extended, t)?;
    let fe = f.embed(&extended)?;
    let te = theta.embed(&extended)?;
    let total = fe.add(&te.mul_poly(&tp))?;
    let total = MatrixGerm::new(
        &extended,
        total.rows(),
        total.cols(),
        total.entries().to_vec(),
        f.is_symmetric(),
    )?;
    Ok(Unfolding {
        parameter: t.to_string(),
        base: f.clone(),
        direction: theta.clone(),
        extended,
        doubled,
        total,
    })
}

impl Unfolding {
    pub fn parameter(&self) -> &str {
        &self.parameter
    }

    pub fn base(&self) -> &MatrixGerm {
        &self.base
    }

    pub fn direction(&self) -> &MatrixGerm {
        &self.direction
    }

    /// `(t, x₁..x_r)`
    pub fn extended_ring(&self) -> &Ring {
        &self.extended
    }

    /// `(t, x₁..x_r, t', x₁'..x_r')`
    pub fn doubled_ring(&self) -> &Ring {
        &self.doubled
    }

    /// `F + t·θ` over the extended ring.
    pub fn total(&self) -> &MatrixGerm {
        &self.total
    }

    /// `{t} ∪ components of F + tθ`.
    pub fn components(&self) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::variable(&self.extended, &self.parameter).unwrap()];
        out.extend(self.total.components());
        out
    }

    /// `I_D(F̃)`.
    pub fn double_ideal(&self) -> Result<DoubledIdeal> {
        double_ideal_in(&self.components(), &self.doubled, "F̃")
    }

    /// `∂F̃/∂t` over the extended ring.
    pub fn velocity(&self) -> Result<MatrixGerm> {
        self.total.partial_derivative(&self.parameter)
    }

    /// `I_D(∂F̃/∂t)`, which equals `I_D(θ)` for linear unfoldings.
    pub fn direction_ideal(&self) -> Result<DoubledIdeal> {
        let v = self.velocity()?;
        let comps = v.components();
        if comps.is_empty() {
            return Ok(DoubledIdeal {
                source: "θ".into(),
                components: Vec::new(),
                ideal: Ideal::zero(&self.doubled),
            });
        }
        double_ideal_in(&comps, &self.doubled, "θ")
    }

    /// `I_Δ` of the doubled ring.
    pub fn diagonal_ideal(&self) -> Ideal {
        diagonal_ideal(&self.doubled).expect("unfolding rings are doubled")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::Budget;
    use crate::poly::MonomialOrder;

    fn xy() -> Ring {
        RingContext::new(&["x", "y"], MonomialOrder::GrevLex).unwrap()
    }

    fn germ(text: &str) -> MatrixGerm {
        MatrixGerm::parse_in(text, &xy()).unwrap()
    }

    #[test]
    fn doubles() {
        let r = xy();
        let d = double_of(&Polynomial::parse("y^3", &r).unwrap()).unwrap();
        assert_eq!(d.to_string(), "y^3 - y'^3");
        let x = double_of(&Polynomial::parse("x", &r).unwrap()).unwrap();
        assert_eq!(x.to_string(), "x - x'");
        assert!(double_of(&Polynomial::parse("5", &r).unwrap())
            .unwrap()
            .is_zero());
        assert!(matches!(double_of(&x), Err(Error::NoDoubledExtension(_))));
    }

    #[test]
    fn coordinate_doubles_give_the_diagonal() {
        let r = xy();
        let comps = [
            Polynomial::parse("x", &r).unwrap(),
            Polynomial::parse("y", &r).unwrap(),
        ];
        let di = double_ideal(&comps).unwrap();
        let diag = diagonal_ideal(di.ring()).unwrap();
        let b = Budget::default();
        assert!(di.ideal().contains_ideal(&diag, &b).unwrap());
        assert!(diag.contains_ideal(di.ideal(), &b).unwrap());
        assert_eq!(diag.generators().len(), 2);
    }

    #[test]
    fn constant_component_gives_zero_ideal() {
        let r = xy();
        let di = double_ideal(&[Polynomial::parse("5", &r).unwrap()]).unwrap();
        assert!(di.is_zero());
        assert!(matches!(double_ideal(&[]), Err(Error::EmptyComponents)));
    }

    #[test]
    fn diagonal_needs_doubled_ring() {
        assert!(matches!(diagonal_ideal(&xy()), Err(Error::NotDoubled(_))));
    }

    #[test]
    fn unfolding_totals() {
        let f = germ("sym: y, x ; x, y^2");
        let theta = germ("sym: 1, 0 ; 0, 1");
        let u = build_unfolding(&f, &theta, "t").unwrap();
        assert_eq!(u.total().to_string(), "sym: t + y, x ; x, y^2 + t");

        let e6 = germ("sym: x, y^2 ; y^2, x^2");
        let u = build_unfolding(&e6, &germ("sym: y, 0 ; 0, 0"), "t").unwrap();
        assert_eq!(u.total().to_string(), "sym: t*y + x, y^2 ; y^2, x^2");

        let zero = MatrixGerm::zero(&xy(), 2, 2, true);
        let u = build_unfolding(&e6, &zero, "t").unwrap();
        assert_eq!(u.total(), &e6.embed(u.extended_ring()).unwrap());
        assert!(u.direction_ideal().unwrap().is_zero());
    }

    #[test]
    fn unfolding_errors() {
        let f = germ("sym: y, x ; x, y^2");
        let bad = germ("gen: x, y");
        assert!(matches!(
            build_unfolding(&f, &bad, "t"),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            build_unfolding(&f, &f, "x"),
            Err(Error::SymbolCollision(_))
        ));
    }

    #[test]
    fn d5_double_ideal_with_parameters_identified() {
        // diag(x, y^2 + x^3) with θ off-diagonal c·y, c = 1
        let f = germ("sym: x, 0 ; 0, y^2 + x^3");
        let theta = germ("sym: 0, y ; y, 0");
        let u = build_unfolding(&f, &theta, "t").unwrap();
        let di = u.double_ideal().unwrap();
        let shown: Vec<String> = di.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(shown.len(), 4);
        assert!(shown.contains(&"t - t'".to_string()));
        assert!(shown.contains(&"x - x'".to_string()));
        assert!(shown.contains(&"t*y - t'*y'".to_string()));
        let view: Vec<String> = di
            .identified_view("t")
            .unwrap()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(view.len(), 3);
        assert!(view.contains(&"t*y - t*y'".to_string()));
        for g in di.generators() {
            assert!(u
                .diagonal_ideal()
                .contains_poly(g, &Budget::default())
                .unwrap());
        }
    }
}
