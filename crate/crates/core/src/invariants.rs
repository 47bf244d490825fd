//! Top-level invariant computations.
//!
//! Everything here reduces to one pipeline: carry a characteristic class
//! through the blowup tower, apply hypersurface adjunction, push down every
//! blowup, push down the projective bundle, and read off the class in the
//! base ring over the symbols L, D, c1..cn (plus y for the chi_y flavor).
//!
//! Chern flavor results are honest classes in the base. Hirzebruch flavor
//! results are prefactors of the (opaque) base Hirzebruch class: that class
//! is pulled back from the base, so the projection formula lets it ride
//! through every pushforward untouched, and the pipeline simply computes
//! with the constant 1 in its place. The prefactor is an infinite y-series
//! in the truncated ring; the model-dependent part of it (the difference
//! against the smooth model) is a y-polynomial supported on the singular
//! locus. Multiplying the prefactor by the expanded base Hirzebruch class
//! and integrating yields the honest chi_y intersection polynomial, which
//! is a y-polynomial of degree at most dim(base)+1 with palindromic
//! coefficients.

use crate::chowring::{rat_int, ChowRing, ClassExpr, Error, Rat, Result};
use crate::classes::{base_chern_total, exp_neg, hirzebruch_base_expanded};
use crate::pushforward::{integrate_base, projective_bundle_pushforward};
use crate::towers::{builtin_tower_with_y_cutoff, Flavor, ModelKind, Tower};

// ---------------------------------------------------------------------------
// Base-class results
// ---------------------------------------------------------------------------

/// A class pushed to the base: free of fiber and exceptional symbols, of
/// geometric degree at most the base dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseClassResult {
    pub model: String,
    pub base_dim: u32,
    pub klass: ClassExpr,
}

fn to_base(t: &Tower, cls: &ClassExpr) -> Result<ClassExpr> {
    let base = t.ring().base_ring(t.base_dim);
    cls.transport(&base)
}

/// Stringy Chern class of the model pushed to the base.
pub fn stringy_chern_base(t: &Tower) -> Result<BaseClassResult> {
    let ambient_cls = t.resolved_class_in_ambient(Flavor::Chern)?;
    let pushed = projective_bundle_pushforward(&ambient_cls, &t.ambient)?;
    Ok(BaseClassResult {
        model: t.name.clone(),
        base_dim: t.base_dim,
        klass: to_base(t, &pushed)?,
    })
}

/// A smooth tower sharing the base dimension and cutoffs of `t`.
pub fn smooth_companion(t: &Tower) -> Result<Tower> {
    builtin_tower_with_y_cutoff(ModelKind::Smooth, t.base_dim, t.ring().y_cutoff)
}

/// Stringy Milnor class pushed to the base: the deviation of the stringy
/// Chern class from the smooth model's class. Supported on the singular
/// locus, so every monomial carries a factor of D.
pub fn milnor_class(t: &Tower) -> Result<BaseClassResult> {
    let full = stringy_chern_base(t)?;
    let smooth = stringy_chern_base(&smooth_companion(t)?)?;
    Ok(BaseClassResult {
        model: t.name.clone(),
        base_dim: t.base_dim,
        klass: &full.klass - &smooth.klass,
    })
}

// ---------------------------------------------------------------------------
// Milnor-class factorization (the W identity)
// ---------------------------------------------------------------------------

/// The closed-form factor W with `Milnor = W . c(D)` for each singular
/// model, expanded in the given base ring. The smooth model has W = 0.
pub fn displayed_w(kind: ModelKind, ring: &ChowRing) -> Result<ClassExpr> {
    let l = ring.sym("L")?;
    let d = ring.sym("D")?;
    let one = ring.one();
    let poly = |terms: &[(i64, u32, u32)]| -> ClassExpr {
        let mut acc = ring.zero();
        for &(c, dl, dd) in terms {
            acc = &acc + &(&l.pow(dl) * &d.pow(dd)).scale(c);
        }
        acc
    };
    let unit = |terms: &[(i64, u32, u32)]| -> ClassExpr { &one + &poly(terms) };
    let (scalar, num, extra_denom) = match kind {
        ModelKind::Smooth => return Ok(ring.zero()),
        ModelKind::Su5 { .. } => (
            5,
            poly(&[(36, 3, 0), (42, 2, 0), (16, 1, 0), (-31, 1, 1), (-30, 2, 1), (-6, 0, 1)]),
            unit(&[(1, 1, 0)]), // 1 + L
        ),
        ModelKind::So10 => (
            4,
            poly(&[
                (108, 3, 0),
                (84, 2, 0),
                (21, 1, 0),
                (10, 0, 2),
                (45, 1, 2),
                (-77, 1, 1),
                (-144, 2, 1),
                (-8, 0, 1),
            ]),
            unit(&[(2, 1, 0), (-1, 0, 1)]), // 1 + 2L - D
        ),
        ModelKind::E6 => (
            3,
            poly(&[
                (252, 3, 0),
                (162, 2, 0),
                (-378, 2, 1),
                (-165, 1, 1),
                (30, 1, 0),
                (-12, 0, 1),
                (140, 1, 2),
                (30, 0, 2),
            ]),
            unit(&[(3, 1, 0), (-2, 0, 1)]), // 1 + 3L - 2D
        ),
    };
    let d1 = unit(&[(6, 1, 0)]); // 1 + 6L
    let d2 = unit(&[(6, 1, 0), (-5, 0, 1)]); // 1 + 6L - 5D
    let mut w = num.scale(scalar);
    for den in [d1, d2, extra_denom] {
        w = &w * &den.invert_unit()?;
    }
    Ok(w)
}

/// Total Chern class of the singular-locus divisor pushed to the base:
/// `D . c(B) / (1 + D)`.
pub fn divisor_chern_pushed(ring: &ChowRing, base_dim: u32) -> Result<ClassExpr> {
    let d = ring.sym("D")?;
    let cb = base_chern_total(ring, base_dim);
    Ok(&(&d * &cb) * &(&ring.one() + &d).invert_unit()?)
}

/// Outcome of checking `Milnor = W . c(D)` for a built-in model.
#[derive(Clone, Debug)]
pub struct MilnorFactorizationReport {
    pub model: String,
    pub base_dim: u32,
    /// `milnor_class - W . c(D)`; zero exactly when the identity holds.
    pub difference: ClassExpr,
    /// The truncated W recovered from the computed Milnor class, for
    /// inspection (division by D and by the unit c(D)/D).
    pub computed_w: Option<ClassExpr>,
}

impl MilnorFactorizationReport {
    pub fn holds(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Check the Milnor-class factorization against the closed-form W.
pub fn verify_milnor_factorization(
    kind: ModelKind,
    base_dim: u32,
) -> Result<MilnorFactorizationReport> {
    let t = crate::towers::builtin_tower(kind, base_dim)?;
    let milnor = milnor_class(&t)?;
    let ring = milnor.klass.ring();
    let w = displayed_w(kind, &ring)?;
    let rhs = &w * &divisor_chern_pushed(&ring, base_dim)?;
    let difference = &milnor.klass - &rhs;
    let computed_w = extract_w(&milnor.klass, base_dim).ok();
    Ok(MilnorFactorizationReport {
        model: t.name.clone(),
        base_dim,
        difference,
        computed_w,
    })
}

/// Recover the truncated W from a computed Milnor class by dividing out
/// `D . c(B) / (1 + D)`. Fails if the class is not divisible by D.
pub fn extract_w(milnor: &ClassExpr, base_dim: u32) -> Result<ClassExpr> {
    if milnor.is_zero() {
        return Ok(milnor.clone());
    }
    let ring = milnor.ring();
    let by_d = milnor.divide_by_symbol("D")?;
    let unit = &base_chern_total(&ring, base_dim)
        * &(&ring.one() + &ring.sym("D")?).invert_unit()?;
    Ok(&by_d * &unit.invert_unit()?)
}

// ---------------------------------------------------------------------------
// Euler characteristic rows
// ---------------------------------------------------------------------------

/// The integrated intersection polynomial of the stringy Chern class.
///
/// With `calabi_yau` set, L is replaced by c1 and the resulting c1*c2
/// monomial by the number 24: the anti-canonical choice of the bundle plus
/// `chi(O_B) = 1`, which fixes the degree-three intersection number of
/// c1 c2. That is the only place a numeric normalization enters.
pub fn euler_polynomial(t: &Tower, calabi_yau: bool) -> Result<ClassExpr> {
    let base = stringy_chern_base(t)?;
    let mut row = integrate_base(&base.klass, t.base_dim)?;
    if calabi_yau {
        let ring = row.ring();
        let c1 = ring.sym("c1")?;
        row = row.substitute("L", &c1)?;
        if t.base_dim >= 3 {
            let coeff = row.coeff_in("c2", 1)?.coeff_in("c1", 1)?.constant_term();
            if !num_traits::Zero::is_zero(&coeff) {
                let mono = ring.monomial(&[("c1", 1), ("c2", 1)], coeff.clone())?;
                row = &(&row - &mono) + &ring.constant(&coeff * &rat_int(24));
            }
        }
    }
    Ok(row)
}

// ---------------------------------------------------------------------------
// Hirzebruch flavor
// ---------------------------------------------------------------------------

/// Stringy Hirzebruch series pushed to the base, reported as the prefactor
/// of the opaque base Hirzebruch class. A y-series truncated at the ring's
/// y-cutoff; its model-dependent part is the y-polynomial P.
pub fn stringy_hirzebruch_base(t: &Tower) -> Result<BaseClassResult> {
    let ambient_cls = t.resolved_class_in_ambient(Flavor::Hirzebruch)?;
    let pushed = projective_bundle_pushforward(&ambient_cls, &t.ambient)?;
    Ok(BaseClassResult {
        model: t.name.clone(),
        base_dim: t.base_dim,
        klass: to_base(t, &pushed)?,
    })
}

/// Closed form of the smooth-model prefactor:
/// `1 - y + (1+y)(y e^{-5L} - e^{-L}) / (1 + y e^{-6L})`,
/// expanded in the given base ring to its cutoffs.
pub fn smooth_hirzebruch_prefactor(ring: &ChowRing) -> Result<ClassExpr> {
    let one = ring.one();
    let y = ring.sym("y")?;
    let l = ring.sym("L")?;
    let e5 = exp_neg(&l.scale(5));
    let e1 = exp_neg(&l);
    let e6 = exp_neg(&l.scale(6));
    let num = &(&one + &y) * &(&(&y * &e5) - &e1);
    let den = (&one + &(&y * &e6)).invert_unit()?;
    Ok(&(&one - &y) + &(&num * &den))
}

/// The model-dependent part P of the Hirzebruch prefactor: the difference
/// against the smooth model. Every term carries a factor of D and a factor
/// of y.
pub fn hirzebruch_p_part(t: &Tower) -> Result<ClassExpr> {
    let full = stringy_hirzebruch_base(t)?;
    let smooth = stringy_hirzebruch_base(&smooth_companion(t)?)?;
    Ok(&full.klass - &smooth.klass)
}

/// Coefficient polynomial P_i of y^i in the model-dependent prefactor part.
pub fn p_coefficient(t: &Tower, i: u32) -> Result<ClassExpr> {
    hirzebruch_p_part(t)?.coeff_in("y", i)
}

/// The honest chi_y intersection polynomial: prefactor times the base
/// Hirzebruch class expanded in c1..cn, integrated over the base. An exact
/// y-polynomial of degree at most base_dim + 1 (the fibration dimension)
/// with palindromic coefficients.
pub fn chi_y_polynomial(t: &Tower) -> Result<ClassExpr> {
    let prefactor = stringy_hirzebruch_base(t)?;
    let ring = prefactor.klass.ring();
    let hb = hirzebruch_base_expanded(&ring, t.base_dim);
    integrate_base(&(&prefactor.klass * &hb), t.base_dim)
}

// ---------------------------------------------------------------------------
// Hodge numbers of the smooth Calabi-Yau fourfold
// ---------------------------------------------------------------------------

/// Base data entering the fourfold Hodge-number formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HodgeInput {
    pub h11_base: u32,
    pub h12_base: u32,
    pub c1_cubed: i64,
}

/// The nontrivial Hodge numbers of a smooth Calabi-Yau Weierstrass
/// fourfold over a three-dimensional base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HodgeNumbers {
    pub h11: i64,
    pub h12: i64,
    pub h13: i64,
    pub h22: i64,
}

impl HodgeNumbers {
    /// Topological Euler characteristic from the Hodge diamond of a
    /// simply-connected Calabi-Yau fourfold.
    pub fn euler_characteristic(&self) -> i64 {
        4 + 2 * self.h11 - 4 * self.h12 + 2 * self.h13 + self.h22
    }
}

/// Hodge numbers of the fourfold from base Hodge data and the cubed first
/// Chern class of the base, assuming the hyperplane-section comparison in
/// the low degrees.
pub fn hodge_weierstrass(input: HodgeInput) -> HodgeNumbers {
    let h11b = input.h11_base as i64;
    let h12b = input.h12_base as i64;
    let c = input.c1_cubed;
    HodgeNumbers {
        h11: h11b + 1,
        h12: h12b,
        h13: 39 + 60 * c - h11b + h12b,
        h22: 204 + 240 * c + 2 * h12b,
    }
}

// ---------------------------------------------------------------------------
// Hodge-Deligne polynomials
// ---------------------------------------------------------------------------

/// An integer polynomial in the two Hodge variables u, v.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UvPolynomial {
    terms: std::collections::BTreeMap<(u32, u32), i64>,
}

impl UvPolynomial {
    pub fn zero() -> Self {
        UvPolynomial::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = UvPolynomial::default();
        if c != 0 {
            p.terms.insert((0, 0), c);
        }
        p
    }

    pub fn term(c: i64, pu: u32, pv: u32) -> Self {
        let mut p = UvPolynomial::default();
        if c != 0 {
            p.terms.insert((pu, pv), c);
        }
        p
    }

    /// The polynomial of n-dimensional projective space:
    /// `1 + uv + ... + (uv)^n`.
    pub fn projective_space(n: u32) -> Self {
        let mut p = UvPolynomial::default();
        for k in 0..=n {
            p.terms.insert((k, k), 1);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            let e = out.terms.entry(m).or_insert(0);
            *e += c;
            if *e == 0 {
                out.terms.remove(&m);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = UvPolynomial::default();
        for (&(a, b), &c) in &self.terms {
            for (&(p, q), &d) in &other.terms {
                let e = out.terms.entry((a + p, b + q)).or_insert(0);
                *e += c * d;
                if *e == 0 {
                    out.terms.remove(&(a + p, b + q));
                }
            }
        }
        out
    }

    /// Polynomial of the total space of the rank-3 projective bundle: fiber
    /// P^2, so multiply by `1 + uv + (uv)^2`.
    pub fn projective_bundle(&self) -> Self {
        self.mul(&UvPolynomial::projective_space(2))
    }

    /// Polynomial of a blowup along a center of codimension `k >= 2`:
    /// the exceptional locus replaces the center by a P^{k-1} bundle, adding
    /// `E(center) . (uv + ... + (uv)^{k-1})`.
    pub fn blowup(&self, center: &Self, codim: u32) -> Result<Self> {
        if codim < 2 {
            return Err(Error::BadCenter(format!(
                "blowup codimension {codim} must be at least 2"
            )));
        }
        let mut band = UvPolynomial::default();
        for k in 1..codim {
            band.terms.insert((k, k), 1);
        }
        Ok(self.add(&center.mul(&band)))
    }

    pub fn coefficient(&self, pu: u32, pv: u32) -> i64 {
        self.terms.get(&(pu, pv)).copied().unwrap_or(0)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (&(p, q), &c)) in self.terms.iter().enumerate() {
            let neg = c < 0;
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if p == 1 {
                factors.push("u".into());
            } else if p > 1 {
                factors.push(format!("u^{p}"));
            }
            if q == 1 {
                factors.push("v".into());
            } else if q > 1 {
                factors.push(format!("v^{q}"));
            }
            let mono = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
            let mag = c.unsigned_abs();
            if mono == "1" {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Numeric convenience
// ---------------------------------------------------------------------------

/// Wrapper re-exported for the command line: evaluate an intersection
/// polynomial on assigned monomial values.
pub fn evaluate(a: &ClassExpr, values: &std::collections::BTreeMap<String, Rat>) -> Result<Rat> {
    crate::pushforward::evaluate_numeric(a, values)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
