//! Truncated graded commutative polynomial algebra over exact rationals.
//!
//! Every class computation in this crate runs on [`ClassExpr`]: a sparse
//! polynomial in named divisor/class symbols, truncated at a maximum
//! geometric degree, optionally extended by the degree-zero genus variable
//! `y` (itself truncated at a maximum order). Coefficients are
//! arbitrary-precision rationals; there is no floating point anywhere.
//!
//! Representation invariants:
//! - no stored monomial exceeds either cutoff, no stored coefficient is zero;
//! - the geometric degree of a monomial is the degree-weighted sum of its
//!   non-genus exponents;
//! - truncation is an ideal quotient, so the truncated product of
//!   truncations equals the truncation of the full product.
//!
//! Values are immutable after construction and all operations are pure
//! functions, so independent expressions can be evaluated in parallel.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exact rational coefficient type used throughout the engine.
pub type Rat = BigRational;

/// Convenience constructor for an integer coefficient.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Convenience constructor for the reduced fraction `p/q`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors produced by the symbolic engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    UnknownSymbol(String),
    DuplicateSymbol(String),
    /// Symbol declared with a degree its role does not allow.
    BadDegree { name: String, degree: u32 },
    /// A table may declare at most one fiber symbol and one genus symbol.
    BadTable(String),
    /// Operands live in different symbol tables.
    TableMismatch,
    /// Operands carry different truncation cutoffs.
    CutoffMismatch,
    /// Inversion of an element whose constant term vanishes.
    NotAUnit,
    /// `grade_part` called outside `0..=geo_cutoff`.
    GradeOutOfRange { k: u32, cutoff: u32 },
    /// Numeric evaluation hit a monomial with no assigned value.
    MissingIntersectionNumber(String),
    /// Exact division failed (the divisor does not divide the argument).
    NotDivisible(String),
    /// A blowup center class failed validation.
    BadCenter(String),
    /// A tower definition failed validation.
    BadTower(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownSymbol(name) => write!(f, "unknown symbol `{name}`"),
            Error::DuplicateSymbol(name) => write!(f, "symbol `{name}` declared twice"),
            Error::BadDegree { name, degree } => {
                write!(f, "symbol `{name}` has invalid degree {degree} for its role")
            }
            Error::BadTable(msg) => write!(f, "invalid symbol table: {msg}"),
            Error::TableMismatch => write!(f, "operands belong to different symbol tables"),
            Error::CutoffMismatch => write!(f, "operands have different truncation cutoffs"),
            Error::NotAUnit => write!(f, "element has zero constant term and is not invertible"),
            Error::GradeOutOfRange { k, cutoff } => {
                write!(f, "graded part {k} outside 0..={cutoff}")
            }
            Error::MissingIntersectionNumber(mono) => {
                write!(f, "no intersection number assigned to monomial `{mono}`")
            }
            Error::NotDivisible(msg) => write!(f, "exact division failed: {msg}"),
            Error::BadCenter(msg) => write!(f, "invalid blowup center: {msg}"),
            Error::BadTower(msg) => write!(f, "invalid tower: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

/// Geometric role of a declared symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Relative hyperplane class of the ambient projective bundle.
    Fiber,
    /// Pullback of a class on the base.
    Base,
    /// Exceptional divisor class of a blowup.
    Exceptional,
    /// The genus variable `y` (degree zero).
    Genus,
}

/// One declared symbol: name, geometric degree and role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolEntry {
    pub name: String,
    pub degree: u32,
    pub role: Role,
}

impl SymbolEntry {
    pub fn new(name: &str, degree: u32, role: Role) -> Self {
        SymbolEntry { name: name.to_string(), degree, role }
    }
}

/// Immutable registry of declared symbols.
///
/// Symbol names are unique. The genus symbol has degree 0; every other
/// symbol has degree >= 1. At most one fiber symbol and one genus symbol
/// may be declared.
#[derive(Debug, PartialEq, Eq)]
pub struct SymbolTable {
    entries: Vec<SymbolEntry>,
    /// Non-genus declaration indices sorted by symbol name. Monomial
    /// exponent vectors are stored in this order so that the derived
    /// lexicographic comparison is the canonical one.
    alpha: Vec<usize>,
    /// Declaration index -> position in `alpha` (genus symbol excluded).
    alpha_rank: Vec<Option<usize>>,
    genus: Option<usize>,
}

impl SymbolTable {
    pub fn build(entries: Vec<SymbolEntry>) -> Result<Arc<Self>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut fiber_count = 0usize;
        let mut genus = None;
        for (i, e) in entries.iter().enumerate() {
            if !seen.insert(e.name.clone()) {
                return Err(Error::DuplicateSymbol(e.name.clone()));
            }
            match e.role {
                Role::Genus => {
                    if e.degree != 0 {
                        return Err(Error::BadDegree { name: e.name.clone(), degree: e.degree });
                    }
                    if genus.replace(i).is_some() {
                        return Err(Error::BadTable("two genus symbols".into()));
                    }
                }
                Role::Fiber => {
                    fiber_count += 1;
                    if e.degree != 1 {
                        return Err(Error::BadDegree { name: e.name.clone(), degree: e.degree });
                    }
                }
                _ => {
                    if e.degree == 0 {
                        return Err(Error::BadDegree { name: e.name.clone(), degree: e.degree });
                    }
                }
            }
        }
        if fiber_count > 1 {
            return Err(Error::BadTable("two fiber symbols".into()));
        }
        let mut alpha: Vec<usize> =
            (0..entries.len()).filter(|&i| entries[i].role != Role::Genus).collect();
        alpha.sort_by(|&a, &b| entries[a].name.cmp(&entries[b].name));
        let mut alpha_rank = vec![None; entries.len()];
        for (pos, &i) in alpha.iter().enumerate() {
            alpha_rank[i] = Some(pos);
        }
        Ok(Arc::new(SymbolTable { entries, alpha, alpha_rank, genus }))
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    pub fn entries(&self) -> &[SymbolEntry] {
        &self.entries
    }

    pub fn name(&self, id: usize) -> &str {
        &self.entries[id].name
    }

    pub fn degree(&self, id: usize) -> u32 {
        self.entries[id].degree
    }

    pub fn role(&self, id: usize) -> Role {
        self.entries[id].role
    }

    pub fn genus_id(&self) -> Option<usize> {
        self.genus
    }

    fn width(&self) -> usize {
        self.alpha.len()
    }
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// Internal monomial key. Exponents are stored in name-sorted symbol order
/// so the derived `Ord` is the canonical term order: geometric degree, then
/// y-order, then exponents lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Mono {
    geo: u32,
    y: u32,
    exps: Box<[u8]>,
}

impl Mono {
    fn constant(width: usize) -> Self {
        Mono { geo: 0, y: 0, exps: vec![0u8; width].into_boxed_slice() }
    }
}

// ---------------------------------------------------------------------------
// Ring context
// ---------------------------------------------------------------------------

/// A symbol table together with truncation cutoffs; the handle from which
/// expressions are built.
#[derive(Clone, Debug)]
pub struct ChowRing {
    pub table: Arc<SymbolTable>,
    pub geo_cutoff: u32,
    pub y_cutoff: u32,
}

impl ChowRing {
    pub fn new(table: Arc<SymbolTable>, geo_cutoff: u32, y_cutoff: u32) -> Self {
        ChowRing { table, geo_cutoff, y_cutoff }
    }

    pub fn zero(&self) -> ClassExpr {
        ClassExpr {
            table: self.table.clone(),
            geo_cutoff: self.geo_cutoff,
            y_cutoff: self.y_cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, c: Rat) -> ClassExpr {
        let mut z = self.zero();
        if !c.is_zero() {
            z.terms.insert(Mono::constant(self.table.width()), c);
        }
        z
    }

    pub fn one(&self) -> ClassExpr {
        self.constant(Rat::one())
    }

    pub fn int(&self, n: i64) -> ClassExpr {
        self.constant(rat_int(n))
    }

    pub fn rational(&self, p: i64, q: i64) -> ClassExpr {
        self.constant(rat(p, q))
    }

    /// The declared symbol `name` as an expression.
    pub fn sym(&self, name: &str) -> Result<ClassExpr> {
        self.monomial(&[(name, 1)], Rat::one())
    }

    /// A single monomial with the given exponents and coefficient.
    pub fn monomial(&self, factors: &[(&str, u32)], coeff: Rat) -> Result<ClassExpr> {
        let mut geo = 0u32;
        let mut y = 0u32;
        let mut exps = vec![0u8; self.table.width()];
        for &(name, e) in factors {
            let id = self.table.id(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
            geo += self.table.degree(id) * e;
            match self.table.alpha_rank[id] {
                Some(pos) => exps[pos] += e as u8,
                None => y += e,
            }
        }
        let mut z = self.zero();
        if coeff.is_zero() || geo > self.geo_cutoff || y > self.y_cutoff {
            return Ok(z);
        }
        z.terms.insert(Mono { geo, y, exps: exps.into_boxed_slice() }, coeff);
        Ok(z)
    }

    /// Normalized sum of monomial terms: zero coefficients and over-cutoff
    /// monomials are dropped, repeated monomials merge.
    pub fn make(&self, terms: &[(&[(&str, u32)], Rat)]) -> Result<ClassExpr> {
        let mut acc = self.zero();
        for (factors, coeff) in terms {
            acc = &acc + &self.monomial(factors, coeff.clone())?;
        }
        Ok(acc)
    }

    /// Ring for classes pulled back from the base: drops fiber and
    /// exceptional symbols and truncates at `base_dim`.
    pub fn base_ring(&self, base_dim: u32) -> ChowRing {
        let entries: Vec<SymbolEntry> = self
            .table
            .entries()
            .iter()
            .filter(|e| matches!(e.role, Role::Base | Role::Genus))
            .cloned()
            .collect();
        let table = SymbolTable::build(entries).expect("base table subset is valid");
        ChowRing::new(table, base_dim, self.y_cutoff)
    }
}

// ---------------------------------------------------------------------------
// ClassExpr
// ---------------------------------------------------------------------------

/// A truncated graded polynomial over exact rationals; see module docs.
#[derive(Clone)]
pub struct ClassExpr {
    table: Arc<SymbolTable>,
    geo_cutoff: u32,
    y_cutoff: u32,
    terms: BTreeMap<Mono, Rat>,
}

impl PartialEq for ClassExpr {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.table, &other.table) || *self.table == *other.table)
            && self.geo_cutoff == other.geo_cutoff
            && self.y_cutoff == other.y_cutoff
            && self.terms == other.terms
    }
}

impl Eq for ClassExpr {}

impl ClassExpr {
    pub fn ring(&self) -> ChowRing {
        ChowRing::new(self.table.clone(), self.geo_cutoff, self.y_cutoff)
    }

    pub fn geo_cutoff(&self) -> u32 {
        self.geo_cutoff
    }

    pub fn y_cutoff(&self) -> u32 {
        self.y_cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the bidegree-(0,0) monomial.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Mono::constant(self.table.width()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.table, &other.table) || *self.table == *other.table,
            "{}",
            Error::TableMismatch
        );
        assert!(
            self.geo_cutoff == other.geo_cutoff && self.y_cutoff == other.y_cutoff,
            "{}",
            Error::CutoffMismatch
        );
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    // ---- arithmetic ----

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let c = if negate { -c.clone() } else { c.clone() };
            *out.terms.entry(m.clone()).or_insert_with(Rat::zero) += c;
        }
        out.normalized()
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let (a, b) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = a.ring().zero();
        let width = a.table.width();
        for (mb, cb) in &b.terms {
            // Terms are keyed by ascending geometric degree, so partners of
            // `mb` that survive truncation form a prefix range of `a.terms`.
            let max_geo = a.geo_cutoff - mb.geo;
            let bound = Mono { geo: max_geo + 1, y: 0, exps: vec![0u8; width].into_boxed_slice() };
            for (ma, ca) in a.terms.range(..bound) {
                let y = ma.y + mb.y;
                if y > a.y_cutoff {
                    continue;
                }
                let mut exps = ma.exps.clone();
                for (e, f) in exps.iter_mut().zip(mb.exps.iter()) {
                    *e += f;
                }
                let key = Mono { geo: ma.geo + mb.geo, y, exps };
                *out.terms.entry(key).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        out.normalized()
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return self.ring().zero();
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= r;
        }
        out
    }

    pub fn scale(&self, n: i64) -> Self {
        self.mul_rat(&rat_int(n))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = self.ring().one();
        for _ in 0..n {
            out = out.mul_impl(self);
        }
        out
    }

    /// Multiplicative inverse of a unit (nonzero constant term); every
    /// positive-bidegree part is nilpotent under truncation, so the
    /// geometric series for `1/(c(1+n))` terminates.
    pub fn invert_unit(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NotAUnit);
        }
        let ring = self.ring();
        let scaled = self.mul_rat(&(Rat::one() / &c));
        let nil = &ring.one() - &scaled; // n with scaled = 1 - n, all terms of positive bidegree
        let mut acc = ring.one();
        let mut term = nil.clone();
        while !term.is_zero() {
            acc = &acc + &term;
            term = term.mul_impl(&nil);
        }
        Ok(acc.mul_rat(&(Rat::one() / &c)))
    }

    // ---- structural operations ----

    /// Replace every occurrence of `var` by `value` and re-truncate.
    pub fn substitute(&self, var: &str, value: &ClassExpr) -> Result<Self> {
        let id = self.table.id(var).ok_or_else(|| Error::UnknownSymbol(var.into()))?;
        self.assert_compatible(value);
        let ring = self.ring();
        let rank = self.table.alpha_rank[id];
        let max_pow = self
            .terms
            .keys()
            .map(|m| match rank {
                Some(pos) => m.exps[pos] as u32,
                None => m.y,
            })
            .max()
            .unwrap_or(0);
        let mut powers = Vec::with_capacity(max_pow as usize + 1);
        powers.push(ring.one());
        for i in 1..=max_pow {
            powers.push(powers[i as usize - 1].mul_impl(value));
        }
        let deg = self.table.degree(id);
        let mut out = ring.zero();
        for (m, c) in &self.terms {
            let (e, stripped) = match rank {
                Some(pos) => {
                    let e = m.exps[pos] as u32;
                    let mut exps = m.exps.clone();
                    exps[pos] = 0;
                    (e, Mono { geo: m.geo - deg * e, y: m.y, exps })
                }
                None => (m.y, Mono { geo: m.geo, y: 0, exps: m.exps.clone() }),
            };
            let mut base = ring.zero();
            base.terms.insert(stripped, c.clone());
            out = &out + &base.mul_impl(&powers[e as usize]);
        }
        Ok(out)
    }

    /// Substitute a rational number for the genus variable. Only meaningful
    /// when the expression is an exact polynomial in `y` (all orders above
    /// its true degree vanish); the caller is responsible for that.
    pub fn substitute_y(&self, value: &Rat) -> Result<Self> {
        let id = self
            .table
            .genus_id()
            .ok_or_else(|| Error::UnknownSymbol("y".into()))?;
        let name = self.table.name(id).to_string();
        self.substitute(&name, &self.ring().constant(value.clone()))
    }

    /// Coefficient of `var^power`, an expression free of `var`.
    pub fn coeff_in(&self, var: &str, power: u32) -> Result<Self> {
        let id = self.table.id(var).ok_or_else(|| Error::UnknownSymbol(var.into()))?;
        let rank = self.table.alpha_rank[id];
        let deg = self.table.degree(id);
        let mut out = self.ring().zero();
        for (m, c) in &self.terms {
            match rank {
                Some(pos) => {
                    if m.exps[pos] as u32 != power {
                        continue;
                    }
                    let mut exps = m.exps.clone();
                    exps[pos] = 0;
                    out.terms.insert(Mono { geo: m.geo - deg * power, y: m.y, exps }, c.clone());
                }
                None => {
                    if m.y != power {
                        continue;
                    }
                    out.terms.insert(Mono { geo: m.geo, y: 0, exps: m.exps.clone() }, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Highest power of `var` occurring in the expression.
    pub fn max_power(&self, var: &str) -> Result<u32> {
        let id = self.table.id(var).ok_or_else(|| Error::UnknownSymbol(var.into()))?;
        let rank = self.table.alpha_rank[id];
        Ok(self
            .terms
            .keys()
            .map(|m| match rank {
                Some(pos) => m.exps[pos] as u32,
                None => m.y,
            })
            .max()
            .unwrap_or(0))
    }

    /// Sum of monomials of geometric degree exactly `k` (all y-orders kept).
    pub fn grade_part(&self, k: u32) -> Result<Self> {
        if k > self.geo_cutoff {
            return Err(Error::GradeOutOfRange { k, cutoff: self.geo_cutoff });
        }
        let mut out = self.ring().zero();
        for (m, c) in &self.terms {
            if m.geo == k {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Largest geometric degree with a nonzero term.
    pub fn max_geo_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.geo).max().unwrap_or(0)
    }

    /// Largest y-order with a nonzero term.
    pub fn max_y_order(&self) -> u32 {
        self.terms.keys().map(|m| m.y).max().unwrap_or(0)
    }

    /// True if the expression is zero or homogeneous of geometric degree `k`.
    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|m| m.geo == k)
    }

    /// Drop every monomial whose degree in base-role symbols exceeds
    /// `base_dim`; such a monomial is the pullback of a class that vanishes
    /// on the base, so this never changes a pushed-to-base answer.
    pub fn kill_base_overflow(&self, base_dim: u32) -> Self {
        let base_degree: Vec<u32> = self
            .table
            .alpha
            .iter()
            .map(|&id| if self.table.role(id) == Role::Base { self.table.degree(id) } else { 0 })
            .collect();
        let mut out = self.clone();
        out.terms.retain(|m, _| {
            let d: u32 =
                m.exps.iter().zip(base_degree.iter()).map(|(&e, &w)| e as u32 * w).sum();
            d <= base_dim
        });
        out
    }

    /// Re-truncate to new cutoffs (which may be smaller or larger).
    pub fn retruncate(&self, geo_cutoff: u32, y_cutoff: u32) -> Self {
        let mut out = self.clone();
        out.geo_cutoff = geo_cutoff;
        out.y_cutoff = y_cutoff;
        out.terms.retain(|m, _| m.geo <= geo_cutoff && m.y <= y_cutoff);
        out
    }

    /// True if `var` occurs in some monomial.
    pub fn contains(&self, var: &str) -> bool {
        self.max_power(var).map(|p| p > 0).unwrap_or(false)
    }

    /// Exact division by a single symbol; fails if some monomial lacks it.
    pub fn divide_by_symbol(&self, var: &str) -> Result<Self> {
        let id = self.table.id(var).ok_or_else(|| Error::UnknownSymbol(var.into()))?;
        let pos = self.table.alpha_rank[id]
            .ok_or_else(|| Error::NotDivisible("cannot divide by the genus variable".into()))?;
        let deg = self.table.degree(id);
        let mut out = self.ring().zero();
        for (m, c) in &self.terms {
            if m.exps[pos] == 0 {
                return Err(Error::NotDivisible(format!(
                    "monomial `{}` has no factor `{var}`",
                    self.render_monomial(m)
                )));
            }
            let mut exps = m.exps.clone();
            exps[pos] -= 1;
            out.terms.insert(Mono { geo: m.geo - deg, y: m.y, exps }, c.clone());
        }
        Ok(out)
    }

    /// Transport into another ring by matching symbol names. Fails if a
    /// monomial uses a symbol the target does not declare; terms beyond the
    /// target cutoffs are dropped.
    pub fn transport(&self, target: &ChowRing) -> Result<Self> {
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut factors: Vec<(&str, u32)> = Vec::new();
            for (pos, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    let id = self.table.alpha[pos];
                    factors.push((self.table.name(id), e as u32));
                }
            }
            if m.y > 0 {
                let gid = self.table.genus_id().expect("y-order implies genus symbol");
                factors.push((self.table.name(gid), m.y));
            }
            out = &out + &target.monomial(&factors, c.clone())?;
        }
        Ok(out)
    }

    /// Iterate terms as (monomial-string, coefficient) in canonical order.
    pub fn terms_rendered(&self) -> Vec<(String, Rat)> {
        self.terms.iter().map(|(m, c)| (self.render_monomial(m), c.clone())).collect()
    }

    // ---- rendering ----

    fn render_monomial(&self, m: &Mono) -> String {
        let mut parts: Vec<String> = Vec::new();
        // Factors print in declaration order, genus variable last.
        for (id, entry) in self.table.entries().iter().enumerate() {
            if entry.role == Role::Genus {
                continue;
            }
            let pos = self.table.alpha_rank[id].expect("non-genus symbol has a rank");
            let e = m.exps[pos];
            if e == 1 {
                parts.push(entry.name.clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", entry.name, e));
            }
        }
        if m.y == 1 {
            parts.push("y".into());
        } else if m.y > 1 {
            parts.push(format!("y^{}", m.y));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn render_coeff_abs(c: &Rat, parenthesize: bool) -> String {
        let c = c.abs();
        if c.is_integer() {
            c.numer().to_string()
        } else if parenthesize {
            format!("({}/{})", c.numer(), c.denom())
        } else {
            format!("{}/{}", c.numer(), c.denom())
        }
    }

    /// Canonical text rendering: terms sorted by (geometric degree,
    /// y-order, monomial order), coefficients as reduced fractions.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.render_monomial(m);
            if mono == "1" {
                out.push_str(&Self::render_coeff_abs(c, false));
            } else if c.abs().is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&Self::render_coeff_abs(c, true));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassExpr[deg<={}, y<={}]({})", self.geo_cutoff, self.y_cutoff, self.render())
    }
}

// ---- operator impls ----

impl std::ops::Add for &ClassExpr {
    type Output = ClassExpr;
    fn add(self, rhs: &ClassExpr) -> ClassExpr {
        self.add_impl(rhs, false)
    }
}

impl std::ops::Sub for &ClassExpr {
    type Output = ClassExpr;
    fn sub(self, rhs: &ClassExpr) -> ClassExpr {
        self.add_impl(rhs, true)
    }
}

impl std::ops::Mul for &ClassExpr {
    type Output = ClassExpr;
    fn mul(self, rhs: &ClassExpr) -> ClassExpr {
        self.mul_impl(rhs)
    }
}

impl std::ops::Neg for &ClassExpr {
    type Output = ClassExpr;
    fn neg(self) -> ClassExpr {
        ClassExpr::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn small_ring() -> ChowRing {
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
        ChowRing::new(table, 3, 4)
    }

    #[test]
    fn make_literal_and_truncation() {
        let r = small_ring();
        let a = r.make(&[(&[], rat_int(1)), (&[("L", 1)], rat_int(6))]).unwrap();
        assert_eq!(a.render(), "1 + 6*L");
        // over-cutoff monomial drops
        let b = r.make(&[(&[("L", 4)], rat_int(5))]).unwrap();
        assert!(b.is_zero());
        // coefficient merge
        let c = r
            .make(&[(&[("L", 1)], rat_int(2)), (&[("L", 1)], rat_int(4))])
            .unwrap();
        assert_eq!(c.render(), "6*L");
    }

    #[test]
    fn make_unknown_symbol() {
        let r = small_ring();
        assert_eq!(
            r.make(&[(&[("Q", 1)], rat_int(1))]).unwrap_err(),
            Error::UnknownSymbol("Q".into())
        );
    }

    #[test]
    fn mul_expansion() {
        let r = small_ring();
        let h = r.sym("H").unwrap();
        let l = r.sym("L").unwrap();
        let a = &r.one() + &h;
        let b = &(&r.one() + &h) + &l.scale(2);
        let p = &a * &b;
        // (1+H)(1+H+2L) = 1 + 2H + 2L + H^2 + 2HL
        let expected = r
            .make(&[
                (&[], rat_int(1)),
                (&[("H", 1)], rat_int(2)),
                (&[("L", 1)], rat_int(2)),
                (&[("H", 2)], rat_int(1)),
                (&[("H", 1), ("L", 1)], rat_int(2)),
            ])
            .unwrap();
        assert_eq!(p, expected);
        // identity and truncation
        assert_eq!(&p * &r.one(), p);
        let l2 = l.pow(2);
        assert!((&l2 * &l2).is_zero());
    }

    #[test]
    fn invert_geometric_series() {
        let r = small_ring();
        let a = r.make(&[(&[], rat_int(1)), (&[("L", 1)], rat_int(6))]).unwrap();
        let inv = a.invert_unit().unwrap();
        assert_eq!(inv.render(), "1 - 6*L + 36*L^2 - 216*L^3");
        assert_eq!(&a * &inv, r.one());
        // no constant term -> not a unit
        let l6 = r.sym("L").unwrap().scale(6);
        assert_eq!(l6.invert_unit().unwrap_err(), Error::NotAUnit);
        // unit with a pure-y part inverts fine
        let u = r.make(&[(&[], rat_int(1)), (&[("y", 1)], rat_int(1))]).unwrap();
        let ui = u.invert_unit().unwrap();
        assert_eq!(&u * &ui, r.one());
    }

    #[test]
    fn substitute_basics() {
        let r = small_ring();
        let h2 = r.sym("H").unwrap().pow(2);
        let m3l = r.sym("L").unwrap().scale(-3);
        assert_eq!(h2.substitute("H", &m3l).unwrap().render(), "9*L^2");
        let a = r.make(&[(&[("H", 1), ("L", 1)], rat_int(2))]).unwrap();
        assert_eq!(a.substitute("H", &r.sym("H").unwrap()).unwrap(), a);
        // genus substitution: 1 - y + y^2 at y = -1 gives 3
        let p = r
            .make(&[(&[], rat_int(1)), (&[("y", 1)], rat_int(-1)), (&[("y", 2)], rat_int(1))])
            .unwrap();
        assert_eq!(p.substitute_y(&rat_int(-1)).unwrap(), r.int(3));
    }

    #[test]
    fn coeff_in_partitions() {
        let r = small_ring();
        // (H+2L)(H+3L)D = H^2 D + 5 H L D + 6 L^2 D
        let h = r.sym("H").unwrap();
        let l = r.sym("L").unwrap();
        let d = r.sym("D").unwrap();
        let p = &(&(&h + &l.scale(2)) * &(&h + &l.scale(3))) * &d;
        assert_eq!(p.coeff_in("H", 1).unwrap().render(), "5*L*D");
        // reassembly
        let mut back = r.zero();
        for i in 0..=p.max_power("H").unwrap() {
            back = &back + &(&p.coeff_in("H", i).unwrap() * &h.pow(i));
        }
        assert_eq!(back, p);
        assert!(l.pow(2).coeff_in("H", 3).unwrap().is_zero());
    }

    #[test]
    fn grade_part_partitions() {
        let r = small_ring();
        let a = r
            .make(&[(&[], rat_int(1)), (&[("L", 1)], rat_int(6)), (&[("L", 2)], rat_int(36))])
            .unwrap();
        assert_eq!(a.grade_part(1).unwrap().render(), "6*L");
        let mut back = r.zero();
        for k in 0..=3 {
            back = &back + &a.grade_part(k).unwrap();
        }
        assert_eq!(back, a);
        assert!(matches!(a.grade_part(9), Err(Error::GradeOutOfRange { .. })));
    }

    #[test]
    fn kill_base_overflow_drops_pullbacks_of_zero() {
        let table = SymbolTable::build(vec![
            SymbolEntry::new("H", 1, Role::Fiber),
            SymbolEntry::new("L", 1, Role::Base),
        ])
        .unwrap();
        let r = ChowRing::new(table, 5, 0);
        let a = r.make(&[(&[("L", 4), ("H", 1)], rat_int(1))]).unwrap();
        assert!(a.kill_base_overflow(3).is_zero());
        let b = r.make(&[(&[("L", 3), ("H", 2)], rat_int(1))]).unwrap();
        assert_eq!(b.kill_base_overflow(3), b);
        // idempotent
        assert_eq!(b.kill_base_overflow(3).kill_base_overflow(3), b.kill_base_overflow(3));
    }

    #[test]
    fn canonical_rendering() {
        let r = small_ring();
        // 12*L*c2 - 72*L^2*c1 + 432*L^3
        let a = r
            .make(&[
                (&[("L", 1), ("c2", 1)], rat_int(12)),
                (&[("L", 2), ("c1", 1)], rat_int(-72)),
                (&[("L", 3)], rat_int(432)),
            ])
            .unwrap();
        assert_eq!(a.render(), "12*L*c2 - 72*L^2*c1 + 432*L^3");
        let b = r
            .make(&[
                (&[("L", 1), ("c1", 1)], rat_int(12)),
                (&[("L", 2)], rat_int(-72)),
                (&[("L", 1), ("D", 1)], rat_int(80)),
                (&[("D", 2)], rat_int(-30)),
            ])
            .unwrap();
        assert_eq!(b.render(), "12*L*c1 - 72*L^2 + 80*L*D - 30*D^2");
        // fractions render parenthesized when attached to a monomial
        let c = r.make(&[(&[("L", 2), ("D", 1)], rat(5487, 2))]).unwrap();
        assert_eq!(c.render(), "(5487/2)*L^2*D");
        assert_eq!(r.zero().render(), "0");
        assert_eq!(r.rational(-1, 2).render(), "-1/2");
    }

    #[test]
    fn transport_between_tables() {
        let r = small_ring();
        let base = r.base_ring(3);
        let a = r
            .make(&[(&[("L", 1), ("c2", 1)], rat_int(12)), (&[("y", 1)], rat_int(2))])
            .unwrap();
        let b = a.transport(&base).unwrap();
        assert_eq!(b.render(), "2*y + 12*L*c2");
        // H does not exist in the base table
        let h = r.sym("H").unwrap();
        assert!(h.transport(&base).is_err());
    }

    #[test]
    fn divide_by_symbol_exact() {
        let r = small_ring();
        let a = r
            .make(&[(&[("L", 1), ("D", 1)], rat_int(80)), (&[("D", 2)], rat_int(-30))])
            .unwrap();
        assert_eq!(a.divide_by_symbol("D").unwrap().render(), "80*L - 30*D");
        let b = r.sym("L").unwrap();
        assert!(b.divide_by_symbol("D").is_err());
    }
}
