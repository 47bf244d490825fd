//! The two pushforward engines.
//!
//! Blowdown: for the blowup of a smooth variety along the smooth complete
//! intersection of divisors with classes `U_1..U_k`, the pushforward of a
//! power of the exceptional class E has the closed form
//!
//! ```text
//!     f_*(E^n) = 1                                   n = 0
//!     f_*(E^n) = 0                                   1 <= n < k
//!     f_*(E^n) = (-1)^(k+1) (prod U_i) h_{n-k}(U)    n >= k
//! ```
//!
//! where `h_m` is the complete homogeneous symmetric polynomial. This is
//! the partial-fraction formula
//! `sum_i (prod_{j!=i} U_j/(U_j - U_i)) U_i^n` with every formal division
//! cancelled: the differences `U_j - U_i` are not units, so the printed
//! formula cannot be evaluated literally. The equivalence is enforced by
//! the Segre-series oracle test, which re-derives both from the birational
//! invariance of Segre classes.
//!
//! Projective bundle: for the bundle of lines in `O + L^a + L^b`, a
//! polynomial `sum_i nu_i H^i` pushes to
//! `sum_{i>=2} nu_i (b(-bL)^{i-2} - a(-aL)^{i-2}) / (b - a)`, whose values
//! on powers of H are the Segre classes of the bundle. Pushing forward
//! along a blowdown preserves geometric degree; along the bundle
//! projection it lowers degree by exactly two, the fiber dimension.

use crate::chowring::{rat_int, ChowRing, ClassExpr, Error, Rat, Result};
use crate::classes::{AmbientModel, LineClass};
use num_traits::Zero;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Centers
// ---------------------------------------------------------------------------

/// Blowup center: a smooth complete intersection of `k` divisors, given by
/// their degree-1 classes. `k` is the codimension of the center.
#[derive(Clone, Debug)]
pub struct Center {
    classes: Vec<LineClass>,
}

impl Center {
    pub fn new(classes: Vec<ClassExpr>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::BadCenter("a center needs at least one divisor class".into()));
        }
        let classes = classes.into_iter().map(LineClass::new).collect::<Result<Vec<_>>>()?;
        Ok(Center { classes })
    }

    pub fn codim(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassExpr> {
        self.classes.iter().map(|c| c.expr())
    }

    fn ring(&self) -> ChowRing {
        self.classes[0].expr().ring()
    }
}

// ---------------------------------------------------------------------------
// Blowdown pushforward
// ---------------------------------------------------------------------------

/// Complete homogeneous symmetric polynomial `h_m` of the given classes,
/// by the recurrence `h_m(x_1..x_j) = h_m(x_1..x_{j-1}) + x_j h_{m-1}(x_1..x_j)`.
fn complete_homogeneous(m: u32, classes: &[&ClassExpr]) -> ClassExpr {
    let ring = classes[0].ring();
    // row[j] = h_i(x_1..x_j) for the current i
    let mut row: Vec<ClassExpr> = vec![ring.one(); classes.len() + 1];
    for _ in 1..=m {
        let mut next: Vec<ClassExpr> = Vec::with_capacity(classes.len() + 1);
        next.push(ring.zero()); // h_i of no variables, i >= 1
        for j in 1..=classes.len() {
            let v = &next[j - 1] + &(classes[j - 1] * &row[j]);
            // row[j] still holds h_{i-1}(x_1..x_j) here
            next.push(v);
        }
        row = next;
    }
    row[classes.len()].clone()
}

/// Pushforward of the n-th power of the exceptional divisor class along the
/// blowdown, in terms of the center classes.
pub fn blowdown_power(n: u32, center: &Center) -> ClassExpr {
    let ring = center.ring();
    let k = center.codim() as u32;
    if n == 0 {
        // the fundamental class pushes to the fundamental class
        return ring.one();
    }
    if n < k {
        return ring.zero();
    }
    let refs: Vec<&ClassExpr> = center.classes().collect();
    let mut acc = complete_homogeneous(n - k, &refs);
    for u in &refs {
        acc = &acc * u;
    }
    if k % 2 == 0 {
        acc = acc.neg();
    }
    acc
}

/// Pushforward of an arbitrary polynomial class along a blowdown: expand in
/// powers of the exceptional symbol and apply the projection formula
/// `f_*(f^*a . E^n) = a . f_*(E^n)` termwise. A class with no exceptional
/// factor is returned unchanged.
pub fn blowdown(a: &ClassExpr, exc: &str, center: &Center) -> Result<ClassExpr> {
    for u in center.classes() {
        if u.contains(exc) {
            return Err(Error::BadCenter(format!(
                "center class `{}` involves the exceptional symbol `{exc}`",
                u.render()
            )));
        }
    }
    let ring = a.ring();
    let mut out = ring.zero();
    for n in 0..=a.max_power(exc)? {
        let coeff = a.coeff_in(exc, n)?;
        if coeff.is_zero() {
            continue;
        }
        out = &out + &(&coeff * &blowdown_power(n, center));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Rational blowdown (exceptional powers against a unit denominator)
// ---------------------------------------------------------------------------

/// Sign of the exceptional term in the unit denominator `1 + T +/- E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(&self, e: &ClassExpr) -> ClassExpr {
        match self {
            Sign::Plus => e.clone(),
            Sign::Minus => e.neg(),
        }
    }
}

/// Pushforward of `E^n / (1 + T +/- E)` in closed form:
///
/// ```text
///     sum_i (prod_{j!=i} U_j/(U_j - U_i)) U_i^n / (1 + T +/- U_i)
/// ```
///
/// The formal divisions by `U_j - U_i` are eliminated by combining the sum
/// over the Vandermonde determinant of the center classes and dividing the
/// numerator exactly by each linear factor. `T` must be free of the
/// exceptional symbol and every `1 + T +/- U_i` must be a unit.
pub fn blowdown_rational(n: u32, t: &ClassExpr, sign: Sign, center: &Center) -> Result<ClassExpr> {
    let ring = t.ring();
    let us: Vec<ClassExpr> = center.classes().cloned().collect();
    let k = us.len();
    {
        let one = ring.one();
        for u in &us {
            let d = &(&one + t) + &sign.apply(u);
            if d.constant_term().is_zero() {
                return Err(Error::NotAUnit);
            }
        }
    }
    if k == 1 {
        let denom = &(&ring.one() + t) + &sign.apply(&us[0]);
        return Ok(&us[0].pow(n) * &denom.invert_unit()?);
    }
    // Each exact division by a pairwise difference costs one degree of
    // accuracy at the top of the truncation window, so the numerator is
    // assembled with that much extra headroom and the result re-truncated.
    let pairs = (k * (k - 1) / 2) as u32;
    let lifted = ChowRing::new(ring.table.clone(), ring.geo_cutoff + pairs, ring.y_cutoff);
    let us: Vec<ClassExpr> =
        us.iter().map(|u| u.retruncate(lifted.geo_cutoff, lifted.y_cutoff)).collect();
    let t = t.retruncate(lifted.geo_cutoff, lifted.y_cutoff);
    let one = lifted.one();
    let denoms: Vec<ClassExpr> = us.iter().map(|u| &(&one + &t) + &sign.apply(u)).collect();
    // Combine over the common denominator: the numerator
    //   N = sum_i s_i U_i^n (prod_{j!=i} U_j) (prod_{j!=i} (1+T +/- U_j))
    // with s_i = (-1)^i times the Vandermonde of the remaining classes is
    // divisible by the full Vandermonde of pairwise differences.
    let mut numerator = lifted.zero();
    for i in 0..k {
        let mut term = us[i].pow(n);
        for (j, u) in us.iter().enumerate() {
            if j != i {
                term = &term * u;
                term = &term * &denoms[j];
            }
        }
        for a in 0..k {
            for b in (a + 1)..k {
                if a != i && b != i {
                    term = &term * &(&us[b] - &us[a]);
                }
            }
        }
        if i % 2 == 1 {
            term = term.neg();
        }
        numerator = &numerator + &term;
    }
    let mut quotient = numerator;
    for a in 0..k {
        for b in (a + 1)..k {
            let diff =
                (&us[b] - &us[a]).retruncate(quotient.geo_cutoff(), quotient.y_cutoff());
            quotient = exact_div_linear(&quotient, &diff)?;
            // exactness now only extends one degree less far
            quotient = quotient.retruncate(quotient.geo_cutoff() - 1, quotient.y_cutoff());
        }
    }
    let quotient = quotient.retruncate(ring.geo_cutoff, ring.y_cutoff);
    let mut out = quotient;
    for u in center.classes() {
        let d = &(&ring.one() + &t.retruncate(ring.geo_cutoff, ring.y_cutoff)) + &sign.apply(u);
        out = &out * &d.invert_unit()?;
    }
    Ok(out)
}

/// Exact division by a homogeneous degree-1 form. Works degreewise on
/// truncated operands, so dividing a truncation of a multiple recovers the
/// truncation of the quotient.
fn exact_div_linear(a: &ClassExpr, lin: &ClassExpr) -> Result<ClassExpr> {
    if a.is_zero() {
        return Ok(a.clone());
    }
    if !lin.is_homogeneous(1) || lin.is_zero() {
        return Err(Error::NotDivisible(format!(
            "divisor `{}` is not a nonzero degree-1 form",
            lin.render()
        )));
    }
    // Pick a pivot symbol present in the divisor and run single-divisor
    // multivariate division with the pivot ordered heaviest; an exact
    // multiple leaves remainder zero.
    let ring = a.ring();
    let pivot = ring
        .table
        .entries()
        .iter()
        .map(|e| e.name.clone())
        .find(|name| lin.contains(name))
        .expect("nonzero form mentions a symbol");
    let pivot_coeff = lin
        .coeff_in(&pivot, 1)?
        .constant_term();
    if pivot_coeff.is_zero() {
        // pivot appears only in higher powers; impossible for a degree-1 form
        return Err(Error::NotDivisible("degenerate divisor".into()));
    }
    let rest = lin - &ring.monomial(&[(&pivot, 1)], pivot_coeff.clone())?;
    // Divide by descending pivot degree: a = sum_d a_d p^d, lin = c p + rest.
    // When `a` is the truncation of an exact multiple the identity
    // a = q . lin holds verbatim in the quotient ring and the remainder
    // vanishes identically.
    let maxd = a.max_power(&pivot)?;
    let mut coeffs: Vec<ClassExpr> = (0..=maxd).map(|d| a.coeff_in(&pivot, d).unwrap()).collect();
    let inv_c = Rat::from_integer(1.into()) / pivot_coeff;
    let mut quotient_parts: Vec<ClassExpr> = vec![ring.zero(); maxd as usize];
    for d in (1..=maxd as usize).rev() {
        let q = coeffs[d].mul_rat(&inv_c);
        // subtract q * p^{d-1} * (c p + rest): the p^d part cancels
        coeffs[d - 1] = &coeffs[d - 1] - &(&q * &rest);
        quotient_parts[d - 1] = q;
    }
    if !coeffs[0].is_zero() {
        return Err(Error::NotDivisible(format!(
            "`{}` does not divide `{}` exactly",
            lin.render(),
            a.render()
        )));
    }
    let p = ring.sym(&pivot)?;
    let mut out = ring.zero();
    let mut ppow = ring.one();
    for part in quotient_parts {
        out = &out + &(&part * &ppow);
        ppow = &ppow * &p;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Projective bundle pushforward
// ---------------------------------------------------------------------------

/// Pushforward to the base of a class polynomial in H (and free of
/// exceptional symbols): strip the H^0 and H^1 parts, divide by H^2, and
/// evaluate `(b F(-bL) - a F(-aL)) / (b - a)`. Equivalently, H^{2+i} maps
/// to the i-th Segre class of the split bundle. The result is re-truncated
/// to the base dimension.
pub fn projective_bundle_pushforward(a: &ClassExpr, m: &AmbientModel) -> Result<ClassExpr> {
    for entry in m.ring.table.entries() {
        if entry.role == crate::chowring::Role::Exceptional && a.contains(&entry.name) {
            return Err(Error::BadTower(format!(
                "class still contains exceptional symbol `{}`; push down all blowups first",
                entry.name
            )));
        }
    }
    let ring = a.ring();
    let l = m.l();
    let (ea, eb) = m.exponents;
    let la = l.scale(-(ea as i64)); // -aL
    let lb = l.scale(-(eb as i64)); // -bL
    let scale = rat_int(eb as i64 - ea as i64).recip();
    let mut out = ring.zero();
    let mut pa = ring.one();
    let mut pb = ring.one();
    for i in 2..=a.max_power("H")? {
        let coeff = a.coeff_in("H", i)?;
        if !coeff.is_zero() {
            let seg = &pb.scale(eb as i64) - &pa.scale(ea as i64);
            out = &out + &(&coeff * &seg.mul_rat(&scale));
        }
        pa = &pa * &la;
        pb = &pb * &lb;
    }
    Ok(out.retruncate(m.base_dim, ring.y_cutoff))
}

/// The degree-`base_dim` graded part of a pushed-to-base class: the
/// intersection polynomial whose monomials denote intersection numbers on
/// the base. All y-orders are retained.
pub fn integrate_base(a: &ClassExpr, base_dim: u32) -> Result<ClassExpr> {
    a.grade_part(base_dim)
}

/// Numeric evaluation of an intersection polynomial: each monomial is
/// replaced by its assigned rational value (the empty monomial counts as 1)
/// and the weighted sum is returned.
pub fn evaluate_numeric(a: &ClassExpr, values: &BTreeMap<String, Rat>) -> Result<Rat> {
    let mut total = Rat::zero();
    for (mono, coeff) in a.terms_rendered() {
        if mono == "1" {
            total += coeff;
            continue;
        }
        match values.get(&mono) {
            Some(v) => total += coeff * v,
            None => return Err(Error::MissingIntersectionNumber(mono)),
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chowring::{rat_int, Role, SymbolEntry, SymbolTable};

    fn ring_with_exc(geo_cutoff: u32, y_cutoff: u32) -> ChowRing {
        let table = SymbolTable::build(vec![
            SymbolEntry::new("H", 1, Role::Fiber),
            SymbolEntry::new("L", 1, Role::Base),
            SymbolEntry::new("D", 1, Role::Base),
            SymbolEntry::new("c1", 1, Role::Base),
            SymbolEntry::new("c2", 2, Role::Base),
            SymbolEntry::new("c3", 3, Role::Base),
            SymbolEntry::new("E1", 1, Role::Exceptional),
            SymbolEntry::new("y", 0, Role::Genus),
        ])
        .unwrap();
        ChowRing::new(table, geo_cutoff, y_cutoff)
    }

    fn center(r: &ChowRing, exprs: &[ClassExpr]) -> Center {
        Center::new(exprs.to_vec()).unwrap()
    }

    #[test]
    fn blowdown_power_divisor_case() {
        // codimension 1: the blowup is an isomorphism, f_*(E^n) = U^n
        let r = ring_with_exc(5, 0);
        let u = &r.sym("H").unwrap() + &r.sym("L").unwrap().scale(2);
        let c = center(&r, &[u.clone()]);
        for n in 0..=4u32 {
            assert_eq!(blowdown_power(n, &c), u.pow(n));
        }
    }

    #[test]
    fn blowdown_power_codim2() {
        let r = ring_with_exc(5, 0);
        let u = r.sym("H").unwrap();
        let v = r.sym("L").unwrap();
        let c = center(&r, &[u.clone(), v.clone()]);
        assert_eq!(blowdown_power(0, &c), r.one());
        assert!(blowdown_power(1, &c).is_zero());
        // f_*(E^2) = -UV
        assert_eq!(blowdown_power(2, &c), (&u * &v).neg());
    }

    #[test]
    fn blowdown_power_codim3_section_class() {
        let r = ring_with_exc(5, 0);
        let h = r.sym("H").unwrap();
        let l = r.sym("L").unwrap();
        let d = r.sym("D").unwrap();
        let u1 = &h + &l.scale(2);
        let u2 = &h + &l.scale(3);
        let c = center(&r, &[u1.clone(), u2.clone(), d.clone()]);
        // f_*(E^3) = U1 U2 U3 for a codimension-3 center
        assert_eq!(blowdown_power(3, &c), &(&u1 * &u2) * &d);
    }

    #[test]
    fn blowdown_projection_formula() {
        let r = ring_with_exc(5, 0);
        let u = r.sym("H").unwrap();
        let v = r.sym("L").unwrap();
        let c = center(&r, &[u.clone(), v.clone()]);
        // exc-free input is returned unchanged
        let alpha = r.make(&[(&[("L", 2)], rat_int(7)), (&[], rat_int(1))]).unwrap();
        assert_eq!(blowdown(&alpha, "E1", &c).unwrap(), alpha);
        // E itself dies for a codimension-2 center
        let e = r.sym("E1").unwrap();
        assert!(blowdown(&e, "E1", &c).unwrap().is_zero());
        // module property: f_*(alpha . a) = alpha . f_*(a)
        let a = r
            .make(&[(&[("E1", 2)], rat_int(3)), (&[("E1", 1), ("L", 1)], rat_int(2))])
            .unwrap();
        let lhs = blowdown(&(&alpha * &a), "E1", &c).unwrap();
        let rhs = &alpha * &blowdown(&a, "E1", &c).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn blowdown_rational_codim1() {
        // f_*(1/(1+T-E)) = 1/(1+T-U) when the center is a divisor
        let r = ring_with_exc(4, 0);
        let u = r.sym("L").unwrap();
        let t = r.sym("D").unwrap();
        let c = center(&r, &[u.clone()]);
        let got = blowdown_rational(0, &t, Sign::Minus, &c).unwrap();
        let want = (&(&r.one() + &t) - &u).invert_unit().unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn blowdown_rational_matches_expansion_route() {
        let r = ring_with_exc(4, 0);
        let u = r.sym("H").unwrap();
        let v = r.sym("L").unwrap();
        let t = &r.sym("D").unwrap() + &r.sym("c1").unwrap();
        let c = center(&r, &[u, v]);
        let e = r.sym("E1").unwrap();
        for n in 0..=3u32 {
            let closed = blowdown_rational(n, &t, Sign::Minus, &c).unwrap();
            // independent route: expand E^n/(1+T-E) as a polynomial in E,
            // then push termwise
            let denom = (&(&r.one() + &t) - &e).invert_unit().unwrap();
            let expanded = &e.pow(n) * &denom;
            let pushed = blowdown(&expanded, "E1", &c).unwrap();
            assert_eq!(closed, pushed, "n = {n}");
        }
    }

    #[test]
    fn exact_division_recovers_quotient() {
        let r = ring_with_exc(4, 0);
        let u = r.sym("H").unwrap();
        let v = r.sym("L").unwrap();
        let lin = &v - &u;
        let q = r
            .make(&[(&[("H", 1), ("L", 1)], rat_int(2)), (&[("D", 2)], rat_int(-5)), (&[], rat_int(3))])
            .unwrap();
        let prod = &q * &lin;
        let got = exact_div_linear(&prod, &lin).unwrap();
        assert_eq!(got, q);
        // a non-multiple is rejected
        let bad = r.make(&[(&[("D", 1)], rat_int(1))]).unwrap();
        assert!(exact_div_linear(&bad, &lin).is_err());
    }

    fn ambient(base_dim: u32) -> AmbientModel {
        let r = ring_with_exc(base_dim + 2, 0);
        AmbientModel::new(r, base_dim, (2, 3)).unwrap()
    }

    #[test]
    fn bundle_pushforward_h_powers() {
        let m = ambient(3);
        let r = &m.ring;
        let h = r.sym("H").unwrap();
        let l = r.sym("L").unwrap();
        assert!(projective_bundle_pushforward(&r.one(), &m).unwrap().is_zero());
        assert!(projective_bundle_pushforward(&h, &m).unwrap().is_zero());
        assert_eq!(projective_bundle_pushforward(&h.pow(2), &m).unwrap(), r.one().retruncate(3, 0));
        assert_eq!(
            projective_bundle_pushforward(&h.pow(3), &m).unwrap(),
            l.scale(-5).retruncate(3, 0)
        );
        assert_eq!(
            projective_bundle_pushforward(&h.pow(4), &m).unwrap(),
            l.pow(2).scale(19).retruncate(3, 0)
        );
        assert_eq!(
            projective_bundle_pushforward(&h.pow(5), &m).unwrap(),
            l.pow(3).scale(-65).retruncate(3, 0)
        );
    }

    #[test]
    fn bundle_pushforward_section_over_singular_locus() {
        let m = ambient(3);
        let r = &m.ring;
        let h = r.sym("H").unwrap();
        let l = r.sym("L").unwrap();
        let d = r.sym("D").unwrap();
        let cls = &(&(&h + &l.scale(2)) * &(&h + &l.scale(3))) * &d;
        assert_eq!(projective_bundle_pushforward(&cls, &m).unwrap(), d.retruncate(3, 0));
    }

    #[test]
    fn bundle_pushforward_rejects_live_exceptional() {
        let m = ambient(2);
        let e = m.ring.sym("E1").unwrap();
        assert!(projective_bundle_pushforward(&e, &m).is_err());
    }

    #[test]
    fn integrate_and_evaluate() {
        let m = ambient(3);
        let r = &m.ring;
        // 12L/(1+6L) . (1 + c1 + c2 + c3) in degree 3
        let l = r.sym("L").unwrap();
        let series = &l.scale(12)
            * &(&r.one() + &l.scale(6)).invert_unit().unwrap();
        let base = crate::classes::base_chern_total(r, 3);
        let row = integrate_base(&(&series * &base), 3).unwrap();
        assert_eq!(row.render(), "12*L*c2 - 72*L^2*c1 + 432*L^3");
        // dimension-1 variant
        let row1 = integrate_base(
            &(&series * &crate::classes::base_chern_total(r, 1)),
            1,
        )
        .unwrap();
        assert_eq!(row1.render(), "12*L");
        // degree-0 integration returns the constant coefficient
        let c = r.make(&[(&[], rat_int(9)), (&[("L", 1)], rat_int(4))]).unwrap();
        assert_eq!(integrate_base(&c, 0).unwrap(), r.int(9));
    }

    #[test]
    fn evaluate_numeric_missing_monomial() {
        let m = ambient(2);
        let r = &m.ring;
        let poly = r
            .make(&[(&[("L", 1), ("D", 1)], rat_int(80)), (&[("D", 2)], rat_int(-30))])
            .unwrap();
        let mut values = BTreeMap::new();
        values.insert("L*D".to_string(), rat_int(2));
        let err = evaluate_numeric(&poly, &values).unwrap_err();
        assert_eq!(err, Error::MissingIntersectionNumber("D^2".into()));
        values.insert("D^2".to_string(), rat_int(1));
        assert_eq!(evaluate_numeric(&poly, &values).unwrap(), rat_int(130));
        assert_eq!(evaluate_numeric(&r.zero(), &values).unwrap(), rat_int(0));
    }
}
