//! Characteristic-class constructors: line-bundle classes, split-bundle and
//! projective-bundle ambient classes, and hypersurface adjunction, in both
//! Chern and Hirzebruch (chi_y genus) flavors.
//!
//! The Hirzebruch class of a line bundle with first Chern class U is
//!
//! ```text
//!     (1 + y e^-U) U / (1 - e^-U)
//! ```
//!
//! interpolating the Todd class (y = 0) and the top Chern class (y = -1).
//! Note the rank-zero normalization differs from the Chern case: the class
//! of a trivial line bundle is 1 + y, not 1. The Hirzebruch class of the
//! ambient projective bundle is derived from the relative Euler sequence,
//! which accounts for the 1/(1+y) factor below.

use crate::chowring::{rat, ChowRing, ClassExpr, Error, Result};

// ---------------------------------------------------------------------------
// Line classes
// ---------------------------------------------------------------------------

/// First Chern class of a line bundle: a homogeneous degree-1 expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineClass(ClassExpr);

impl LineClass {
    pub fn new(expr: ClassExpr) -> Result<Self> {
        if !expr.is_homogeneous(1) {
            return Err(Error::BadCenter(format!(
                "`{}` is not homogeneous of degree 1",
                expr.render()
            )));
        }
        Ok(LineClass(expr))
    }

    pub fn expr(&self) -> &ClassExpr {
        &self.0
    }
}

/// Truncated expansion of `e^-U` for a class with no degree-0 part.
pub fn exp_neg(u: &ClassExpr) -> ClassExpr {
    assert!(
        u.grade_part(0).map(|g| g.is_zero()).unwrap_or(false),
        "exp_neg requires a class with no degree-0 part"
    );
    let ring = u.ring();
    let mut acc = ring.one();
    let mut term = ring.one();
    let mut k: i64 = 0;
    loop {
        k += 1;
        term = &term * u;
        if term.is_zero() {
            break;
        }
        term = term.mul_rat(&rat(-1, k));
        acc = &acc + &term;
    }
    acc
}

// All the series below are univariate functions of a degree-1 class, so
// they are computed once in a single-variable scratch ring (where inversion
// is cheap) and then evaluated at the class by substituting its powers.

fn scratch_ring(like: &ChowRing) -> ChowRing {
    use crate::chowring::{Role, SymbolEntry, SymbolTable};
    let table = SymbolTable::build(vec![
        SymbolEntry::new("x", 1, Role::Base),
        SymbolEntry::new("y", 0, Role::Genus),
    ])
    .expect("scratch table is valid");
    ChowRing::new(table, like.geo_cutoff, like.y_cutoff)
}

/// Evaluate a univariate series (an expression in the scratch symbol `x`
/// and `y`) at the class `u`, in `u`'s ring.
fn compose_series(series: &ClassExpr, u: &ClassExpr) -> ClassExpr {
    let target = u.ring();
    let y = target.sym("y").expect("genus symbol declared");
    let maxj = series.max_power("x").expect("scratch symbol");
    let maxm = series.max_y_order();
    let mut upow: Vec<ClassExpr> = vec![target.one()];
    for j in 1..=maxj as usize {
        upow.push(&upow[j - 1] * u);
    }
    let mut ypow: Vec<ClassExpr> = vec![target.one()];
    for m in 1..=maxm as usize {
        ypow.push(&ypow[m - 1] * &y);
    }
    let mut out = target.zero();
    for j in 0..=maxj {
        let cj = series.coeff_in("x", j).expect("scratch symbol");
        if cj.is_zero() {
            continue;
        }
        for m in 0..=maxm {
            let c = cj.coeff_in("y", m).expect("genus symbol").constant_term();
            if num_traits::Zero::is_zero(&c) {
                continue;
            }
            out = &out + &(&upow[j as usize] * &ypow[m as usize]).mul_rat(&c);
        }
    }
    out
}

/// The Hirzebruch line series `(1 + y e^-x) x / (1 - e^-x)` in the scratch
/// ring; `invert` requests its multiplicative inverse instead.
fn hirzebruch_line_series(like: &ChowRing, invert: bool) -> ClassExpr {
    let scratch = scratch_ring(like);
    let x = scratch.sym("x").expect("scratch symbol");
    // (1 - e^-x)/x = 1 - x/2 + x^2/6 - ... , a unit
    let mut series = scratch.one();
    let mut xpow = scratch.one();
    let mut sign = 1i64;
    let mut fact: i64 = 1;
    for k in 1..=(scratch.geo_cutoff as i64) {
        xpow = &xpow * &x;
        if xpow.is_zero() {
            break;
        }
        sign = -sign;
        fact *= k + 1;
        series = &series + &xpow.mul_rat(&rat(sign, fact));
    }
    let y = scratch.sym("y").expect("genus symbol");
    let factor = &scratch.one() + &(&y * &exp_neg(&x));
    if invert {
        let line = &factor * &series.invert_unit().expect("constant term 1");
        line.invert_unit().expect("constant term 1 in y-degree 0")
    } else {
        &factor * &series.invert_unit().expect("constant term 1")
    }
}

/// Hirzebruch class of a line bundle: `(1 + y e^-U) U / (1 - e^-U)`.
///
/// The quotient `U / (1 - e^-U)` is the inverse of the unit series
/// `(1 - e^-U)/U = 1 - U/2 + U^2/6 - ...`, so `U = 0` automatically yields
/// `1 + y`.
pub fn hirzebruch_line(u: &LineClass) -> ClassExpr {
    let ring = u.expr().ring();
    compose_series(&hirzebruch_line_series(&ring, false), u.expr())
}

/// Multiplicative inverse of [`hirzebruch_line`], computed as a univariate
/// series; an infinite y-series under truncation.
pub fn hirzebruch_line_inverse(u: &LineClass) -> ClassExpr {
    let ring = u.expr().ring();
    compose_series(&hirzebruch_line_series(&ring, true), u.expr())
}

// ---------------------------------------------------------------------------
// Ambient projective bundle
// ---------------------------------------------------------------------------

/// The ambient projective bundle of lines in `O + L^a + L^b` over a base of
/// dimension `base_dim`, together with the ring everything is computed in.
///
/// Expressions are truncated at geometric degree `base_dim + 2`, the
/// dimension of the total space.
#[derive(Clone, Debug)]
pub struct AmbientModel {
    pub ring: ChowRing,
    pub base_dim: u32,
    /// Twist exponents `(a, b)` of the split bundle `O + L^a + L^b`,
    /// strictly increasing from zero.
    pub exponents: (u32, u32),
}

impl AmbientModel {
    pub fn new(ring: ChowRing, base_dim: u32, exponents: (u32, u32)) -> Result<Self> {
        let (a, b) = exponents;
        if a == 0 || b <= a {
            return Err(Error::BadTower(format!(
                "bundle exponents (0, {a}, {b}) must be strictly increasing"
            )));
        }
        Ok(AmbientModel { ring, base_dim, exponents })
    }

    pub fn h(&self) -> ClassExpr {
        self.ring.sym("H").expect("fiber symbol declared")
    }

    pub fn l(&self) -> ClassExpr {
        self.ring.sym("L").expect("bundle symbol declared")
    }

    /// Total Chern class of the base, `1 + c1 + ... + c_{base_dim}`, over
    /// the declared base Chern symbols.
    pub fn base_chern(&self) -> ClassExpr {
        let mut acc = self.ring.one();
        for k in 1..=self.base_dim {
            if let Ok(c) = self.ring.sym(&format!("c{k}")) {
                acc = &acc + &c;
            }
        }
        acc
    }

    /// The three tautological section classes `H`, `H + aL`, `H + bL`.
    pub fn section_classes(&self) -> [ClassExpr; 3] {
        let h = self.h();
        let l = self.l();
        let (a, b) = self.exponents;
        [h.clone(), &h + &l.scale(a as i64), &h + &l.scale(b as i64)]
    }

    /// Total Chern class of the tangent bundle of the ambient space:
    /// `(1+H)(1+H+aL)(1+H+bL)` times the pulled-back base Chern class.
    /// The Chow relation in H is intentionally not imposed; the projective
    /// bundle pushforward handles powers of H.
    pub fn chern_ambient(&self) -> ClassExpr {
        let mut acc = self.base_chern();
        for s in self.section_classes() {
            acc = &acc * &(&self.ring.one() + &s);
        }
        acc
    }

    /// Hirzebruch class of the ambient tangent bundle, from the relative
    /// Euler sequence:
    /// `H(H) H(H+aL) H(H+bL) / (1+y)` times the base class `hirz_base`.
    ///
    /// `hirz_base` stands for the Hirzebruch class of the base; passing 1
    /// treats it as an opaque unit that rides through every pushforward, so
    /// pipeline results are prefactors of that unit.
    pub fn hirzebruch_ambient(&self, hirz_base: &ClassExpr) -> ClassExpr {
        let mut acc = hirz_base.clone();
        for s in self.section_classes() {
            let lc = LineClass::new(s).expect("section classes are degree 1");
            acc = &acc * &hirzebruch_line(&lc);
        }
        let y = self.ring.sym("y").expect("genus symbol declared");
        let one_plus_y = &self.ring.one() + &y;
        &acc * &one_plus_y.invert_unit().expect("1 + y is a unit")
    }
}

// ---------------------------------------------------------------------------
// Hypersurface adjunction
// ---------------------------------------------------------------------------

/// Class of a hypersurface of class `W` pushed into its ambient space:
/// `c_ambient * W / (1 + W)`.
pub fn hypersurface_chern_pushed(c_ambient: &ClassExpr, w: &ClassExpr) -> ClassExpr {
    let ring = c_ambient.ring();
    let denom = (&ring.one() + w).invert_unit().expect("1 + W is a unit");
    &(c_ambient * w) * &denom
}

/// Hirzebruch analogue of hypersurface adjunction:
/// `h_ambient * W / H(W) = h_ambient * (1 - e^-W) / (1 + y e^-W)`.
pub fn hirzebruch_hypersurface_pushed(h_ambient: &ClassExpr, w: &ClassExpr) -> ClassExpr {
    let ring = h_ambient.ring();
    if w.is_zero() {
        return ring.zero();
    }
    // (1 - e^-x)/(1 + y e^-x) as a univariate series, evaluated at W
    let scratch = scratch_ring(&ring);
    let x = scratch.sym("x").expect("scratch symbol");
    let y = scratch.sym("y").expect("genus symbol");
    let ex = exp_neg(&x);
    let num = &scratch.one() - &ex;
    let den = (&scratch.one() + &(&y * &ex)).invert_unit().expect("constant term 1");
    h_ambient * &compose_series(&(&num * &den), w)
}

// ---------------------------------------------------------------------------
// Base Hirzebruch class expanded in Chern classes
// ---------------------------------------------------------------------------

/// Universal expansion of the Hirzebruch class of an n-dimensional base in
/// its Chern classes, truncated at degree n, for n <= 3.
///
/// Derived from the splitting principle: with f(x) = (1+y)A(x) + (1-y)x/2
/// and A(x) = 1 + x^2/12 - x^4/720 + ... the even part of the Todd series,
/// the class is the product of f over the Chern roots, re-expressed in the
/// elementary symmetric classes c1..cn. Only used to cross-check the
/// Chern-flavored results; pipeline computations keep the base class opaque.
pub fn hirzebruch_base_expanded(ring: &ChowRing, base_dim: u32) -> ClassExpr {
    let one = ring.one();
    let y = ring.sym("y").expect("genus symbol declared");
    let p = &one + &y; // 1 + y
    let m = &one - &y; // 1 - y
    let c1 = ring.sym("c1").expect("c1 declared");
    match base_dim {
        1 => {
            // (1+y) + (1-y) c1/2
            &p + &(&m.mul_rat(&rat(1, 2)) * &c1)
        }
        2 => {
            let c2 = ring.sym("c2").expect("c2 declared");
            let p2 = &c1.pow(2) - &c2.scale(2); // second power sum
            let t0 = &p.pow(2) * &(&one + &p2.mul_rat(&rat(1, 12)));
            let t1 = &(&p * &m).mul_rat(&rat(1, 2)) * &c1;
            let t2 = &m.pow(2).mul_rat(&rat(1, 4)) * &c2;
            &(&t0 + &t1) + &t2
        }
        3 => {
            let c2 = ring.sym("c2").expect("c2 declared");
            let c3 = ring.sym("c3").expect("c3 declared");
            let p2 = &c1.pow(2) - &c2.scale(2);
            // c1 c2 - 3 c3 = e1 p2 - p3
            let cross = &(&c1 * &c2) - &c3.scale(3);
            let t0 = &p.pow(3) * &(&one + &p2.mul_rat(&rat(1, 12)));
            let t1 = &(&p.pow(2) * &m)
                * &(&c1.mul_rat(&rat(1, 2)) + &cross.mul_rat(&rat(1, 24)));
            let t2 = &(&p * &m.pow(2)).mul_rat(&rat(1, 4)) * &c2;
            let t3 = &m.pow(3).mul_rat(&rat(1, 8)) * &c3;
            &(&(&t0 + &t1) + &t2) + &t3
        }
        _ => panic!("base dimension {base_dim} not supported (expected 1..=3)"),
    }
}

/// Total Chern class of an n-dimensional base over declared Chern symbols.
pub fn base_chern_total(ring: &ChowRing, base_dim: u32) -> ClassExpr {
    let mut acc = ring.one();
    for k in 1..=base_dim {
        if let Ok(c) = ring.sym(&format!("c{k}")) {
            acc = &acc + &c;
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chowring::{rat_int, Role, SymbolEntry, SymbolTable};

    fn ambient(base_dim: u32, y_cutoff: u32) -> AmbientModel {
        let table = SymbolTable::build(vec![
            SymbolEntry::new("H", 1, Role::Fiber),
            SymbolEntry::new("L", 1, Role::Base),
            SymbolEntry::new("D", 1, Role::Base),
            SymbolEntry::new("c1", 1, Role::Base),
            SymbolEntry::new("c2", 2, Role::Base),
            SymbolEntry::new("c3", 3, Role::Base),
            SymbolEntry::new("y", 0, Role::Genus),
        ])
        .unwrap();
        let ring = ChowRing::new(table, base_dim + 2, y_cutoff);
        AmbientModel::new(ring, base_dim, (2, 3)).unwrap()
    }

    #[test]
    fn chern_ambient_dim1() {
        let m = ambient(1, 0);
        let r = &m.ring;
        let got = m.chern_ambient();
        // (1+H)(1+H+2L)(1+H+3L)(1+c1) truncated at degree 3, by hand
        let h = r.sym("H").unwrap();
        let l = r.sym("L").unwrap();
        let c1 = r.sym("c1").unwrap();
        let f1 = &r.one() + &h;
        let f2 = &(&r.one() + &h) + &l.scale(2);
        let f3 = &(&r.one() + &h) + &l.scale(3);
        let expected = &(&(&f1 * &f2) * &f3) * &(&r.one() + &c1);
        assert_eq!(got, expected);
        assert_eq!(got.grade_part(0).unwrap(), r.one());
        // degree-1 part: 3H + 5L + c1
        let deg1 = &(&h.scale(3) + &l.scale(5)) + &c1;
        assert_eq!(got.grade_part(1).unwrap(), deg1);
    }

    #[test]
    fn chern_ambient_degenerate_l_zero() {
        let m = ambient(1, 0);
        let r = &m.ring;
        let got = m.chern_ambient().substitute("L", &r.zero()).unwrap();
        let h = r.sym("H").unwrap();
        let c1 = r.sym("c1").unwrap();
        let expected = &(&r.one() + &h).pow(3) * &(&r.one() + &c1);
        assert_eq!(got, expected);
    }

    #[test]
    fn hirzebruch_line_series() {
        let m = ambient(2, 3);
        let r = &m.ring;
        let u = LineClass::new(r.sym("L").unwrap()).unwrap();
        let h = hirzebruch_line(&u);
        // (1+y) + U(1-y)/2 + U^2(1+y)/12 + ...
        let got01 = h.grade_part(0).unwrap();
        let y = r.sym("y").unwrap();
        assert_eq!(got01, &r.one() + &y);
        let want1 = (&r.one() - &y).mul_rat(&rat(1, 2));
        assert_eq!(h.grade_part(1).unwrap().divide_by_symbol("L").unwrap(), want1);
        let want2 = (&r.one() + &y).mul_rat(&rat(1, 12));
        assert_eq!(
            h.grade_part(2).unwrap().divide_by_symbol("L").unwrap().divide_by_symbol("L").unwrap(),
            want2
        );
        // trivial bundle: 1 + y, not 1
        let zero = LineClass::new(r.zero()).unwrap();
        assert_eq!(hirzebruch_line(&zero), &r.one() + &y);
        // y = 0 reduces to the Todd series 1 + U/2 + U^2/12
        let todd = h.coeff_in("y", 0).unwrap();
        assert_eq!(todd.grade_part(1).unwrap().render(), "(1/2)*L");
        assert_eq!(todd.grade_part(2).unwrap().render(), "(1/12)*L^2");
        // y = -1 specializes to U itself (it is a degree-1 polynomial in y)
        assert_eq!(h.max_y_order(), 1);
        let at_m1 = h.substitute_y(&rat_int(-1)).unwrap();
        assert_eq!(at_m1, r.sym("L").unwrap());
    }

    #[test]
    fn hirzebruch_line_duality_swap() {
        // y * H(U)|_{y -> 1/y} = H(-U): for a degree-1 polynomial a + b y
        // in y this is the coefficient swap b + a y.
        let m = ambient(3, 4);
        let r = &m.ring;
        let u_expr = &r.sym("L").unwrap().scale(2) + &r.sym("D").unwrap();
        let u = LineClass::new(u_expr.clone()).unwrap();
        let mu = LineClass::new(u_expr.neg()).unwrap();
        let hu = hirzebruch_line(&u);
        let hmu = hirzebruch_line(&mu);
        let a = hu.coeff_in("y", 0).unwrap();
        let b = hu.coeff_in("y", 1).unwrap();
        let y = r.sym("y").unwrap();
        let swapped = &b + &(&a * &y);
        assert_eq!(swapped, hmu);
    }

    #[test]
    fn hirzebruch_ambient_leading_coefficient() {
        let m = ambient(2, 4);
        let r = &m.ring;
        let hb = hirzebruch_base_expanded(r, 2);
        let amb = m.hirzebruch_ambient(&hb);
        // leading coefficient (1+y)^{base_dim} in the base class gives
        // (1+y)^{base_dim+2} for the ambient total space
        let y = r.sym("y").unwrap();
        assert_eq!(amb.grade_part(0).unwrap(), (&r.one() + &y).pow(4));
    }

    #[test]
    fn hypersurface_adjunction_basics() {
        let m = ambient(1, 0);
        let r = &m.ring;
        let c = m.chern_ambient();
        let w = &r.sym("H").unwrap().scale(3) + &r.sym("L").unwrap().scale(6);
        let pushed = hypersurface_chern_pushed(&c, &w);
        // leading term of W/(1+W) times the degree-0 part 1
        assert_eq!(pushed.grade_part(1).unwrap(), w);
        assert!(hypersurface_chern_pushed(&c, &r.zero()).is_zero());
    }

    #[test]
    fn hirzebruch_base_expansion_against_root_product() {
        // Oracle: compute the product of f over explicit root symbols, then
        // substitute the elementary symmetric polynomials for c1..cn.
        for base_dim in 1..=3u32 {
            let mut entries = vec![SymbolEntry::new("y", 0, Role::Genus)];
            for i in 1..=base_dim {
                entries.push(SymbolEntry::new(&format!("r{i}"), 1, Role::Base));
            }
            for k in 1..=base_dim {
                entries.push(SymbolEntry::new(&format!("c{k}"), k, Role::Base));
            }
            let table = SymbolTable::build(entries).unwrap();
            let ring = ChowRing::new(table, base_dim, 4);
            // product of (1+y)A(r) + (1-y) r/2 over roots
            let y = ring.sym("y").unwrap();
            let p = &ring.one() + &y;
            let mm = &ring.one() - &y;
            let mut product = ring.one();
            for i in 1..=base_dim {
                let root = ring.sym(&format!("r{i}")).unwrap();
                // even part of the Todd series: 1 + x^2/12 (x^4 exceeds cutoff)
                let a = &ring.one() + &root.pow(2).mul_rat(&rat(1, 12));
                let f = &(&p * &a) + &(&mm.mul_rat(&rat(1, 2)) * &root);
                product = &product * &f;
            }
            // elementary symmetric polynomials of the roots, from the
            // coefficient-wise expansion of prod (1 + r_i t)
            let roots: Vec<ClassExpr> =
                (1..=base_dim).map(|i| ring.sym(&format!("r{i}")).unwrap()).collect();
            let n = roots.len();
            let mut elem: Vec<ClassExpr> = vec![ring.zero(); n + 1];
            elem[0] = ring.one();
            for r in &roots {
                for k in (1..=n).rev() {
                    let bumped = &elem[k - 1] * r;
                    elem[k] = &elem[k] + &bumped;
                }
            }
            let mut expanded = hirzebruch_base_expanded(&ring, base_dim);
            for k in 1..=base_dim {
                expanded = expanded.substitute(&format!("c{k}"), &elem[k as usize]).unwrap();
            }
            assert_eq!(expanded, product, "base_dim {base_dim}");
        }
    }
}
