//! Blowup towers over the ambient projective bundle, the built-in
//! resolution towers for the singular fibration models, and the transforms
//! that carry ambient characteristic classes through a tower.
//!
//! A tower records an ordered sequence of blowups, each along a smooth
//! complete intersection whose divisor classes are written in the symbols
//! available before that step, plus the multiplicity removed by the proper
//! transform. The hypersurface class of the proper transform after all
//! steps is the original class minus multiplicity times each exceptional
//! class.
//!
//! Center classes for the five- and seven-step towers are derived from the
//! section pullback maps of each blowup: a section `s` with class `[s]`
//! pulling back as `s -> delta t` forces `[t] = [s] - E` for the new
//! exceptional class E. Each derivation is guarded by the exact
//! proper-transform class identities checked in the tests. Where a later
//! center reuses a section class that earlier small-resolution steps have
//! already modified, the class is encoded exactly as the resolution
//! procedure states it, without an exceptional correction.

use crate::chowring::{ChowRing, ClassExpr, Error, Result, Role, SymbolEntry, SymbolTable};
use crate::classes::{
    hirzebruch_hypersurface_pushed, hirzebruch_line, hirzebruch_line_inverse,
    hypersurface_chern_pushed, AmbientModel, LineClass,
};
use crate::pushforward::{blowdown, Center};

// ---------------------------------------------------------------------------
// Model selection
// ---------------------------------------------------------------------------

/// Built-in fibration models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Smooth Weierstrass model: no blowups.
    Smooth,
    /// SU(5) model; six small resolutions labelled 1..=6.
    Su5 { resolution: u8 },
    /// SO(10) model.
    So10,
    /// E6 model.
    E6,
}

impl ModelKind {
    pub fn label(&self) -> String {
        match self {
            ModelKind::Smooth => "smooth".into(),
            ModelKind::Su5 { resolution } => format!("su5(res {resolution})"),
            ModelKind::So10 => "so10".into(),
            ModelKind::E6 => "e6".into(),
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            ModelKind::Smooth => "smooth",
            ModelKind::Su5 { .. } => "su5",
            ModelKind::So10 => "so10",
            ModelKind::E6 => "e6",
        }
    }
}

/// Which characteristic class a pipeline carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Chern,
    Hirzebruch,
}

// ---------------------------------------------------------------------------
// Tower data
// ---------------------------------------------------------------------------

/// One blowup: a fresh exceptional symbol, the center it blows up, and the
/// order of vanishing removed by the proper transform.
#[derive(Clone, Debug)]
pub struct BlowupStep {
    pub exc: String,
    pub center: Center,
    pub multiplicity: u32,
}

/// A blowup tower over the ambient projective bundle together with the
/// hypersurface class whose proper transform is tracked.
#[derive(Clone, Debug)]
pub struct Tower {
    pub name: String,
    pub base_dim: u32,
    pub ambient: AmbientModel,
    pub steps: Vec<BlowupStep>,
    /// Class of the hypersurface before any blowup.
    pub hypersurface: ClassExpr,
}

/// Default y-truncation order for a given base dimension.
pub fn default_y_cutoff(base_dim: u32) -> u32 {
    base_dim + 3
}

impl Tower {
    pub fn ring(&self) -> &ChowRing {
        &self.ambient.ring
    }

    /// Hypersurface class after all steps: the original class minus
    /// multiplicity times each exceptional class.
    pub fn proper_transform_class(&self) -> ClassExpr {
        let mut cls = self.hypersurface.clone();
        for step in &self.steps {
            let e = self.ring().sym(&step.exc).expect("exceptional symbol declared");
            cls = &cls - &e.scale(step.multiplicity as i64);
        }
        cls
    }

    /// Structural validation used for towers built from external sources:
    /// fresh exceptional names, centers of degree 1 in previously available
    /// symbols only.
    pub fn validate(&self) -> Result<()> {
        let ring = self.ring();
        let mut seen: Vec<&str> = Vec::new();
        let mut later: Vec<&str> = self.steps.iter().map(|s| s.exc.as_str()).collect();
        for step in &self.steps {
            later.retain(|n| n != &step.exc.as_str());
            if seen.contains(&step.exc.as_str()) {
                return Err(Error::BadTower(format!(
                    "exceptional name `{}` used twice",
                    step.exc
                )));
            }
            let id = ring
                .table
                .id(&step.exc)
                .ok_or_else(|| Error::UnknownSymbol(step.exc.clone()))?;
            if ring.table.role(id) != Role::Exceptional {
                return Err(Error::BadTower(format!(
                    "`{}` is not an exceptional symbol",
                    step.exc
                )));
            }
            for cls in step.center.classes() {
                if cls.contains(&step.exc) {
                    return Err(Error::BadTower(format!(
                        "center of `{}` involves its own exceptional class",
                        step.exc
                    )));
                }
                for l in &later {
                    if cls.contains(l) {
                        return Err(Error::BadTower(format!(
                            "center of `{}` uses `{l}` before it is created",
                            step.exc
                        )));
                    }
                }
            }
            if step.multiplicity == 0 {
                return Err(Error::BadTower(format!(
                    "blowup `{}` has multiplicity zero",
                    step.exc
                )));
            }
            seen.push(&step.exc);
        }
        Ok(())
    }

    // -----------------------------------------------------------------
    // Class transforms
    // -----------------------------------------------------------------

    /// Total Chern class of the tower's top space: the ambient class
    /// multiplied per step by `(1+E) prod (1+U_i-E) / prod (1+U_i)`.
    ///
    /// Monomials whose base-symbol degree exceeds the base dimension are
    /// pullbacks of zero and are dropped as the product grows; see
    /// [`Tower::resolved_class_in_ambient_with`] for the switch.
    pub fn chern_through(&self) -> ClassExpr {
        self.chern_through_with(true)
    }

    pub fn chern_through_with(&self, drop_base_overflow: bool) -> ClassExpr {
        let ring = self.ring();
        let one = ring.one();
        let kill = |c: ClassExpr| {
            if drop_base_overflow {
                c.kill_base_overflow(self.base_dim)
            } else {
                c
            }
        };
        let mut acc = kill(self.ambient.chern_ambient());
        for step in &self.steps {
            let e = ring.sym(&step.exc).expect("exceptional symbol declared");
            let mut factor = &one + &e;
            for u in step.center.classes() {
                factor = &factor * &(&(&one + u) - &e);
                factor = &factor * &(&one + u).invert_unit().expect("constant term 1");
            }
            acc = kill(&acc * &factor);
        }
        acc
    }

    /// Hirzebruch analogue: ambient class multiplied per step by
    /// `H(E) prod H(U_i - E) / ((1+y) prod H(U_i))`.
    ///
    /// `hirz_base` is the base factor handed to the ambient class; passing 1
    /// keeps the base Hirzebruch class opaque.
    pub fn hirzebruch_through(&self, hirz_base: &ClassExpr) -> ClassExpr {
        self.hirzebruch_through_with(hirz_base, true)
    }

    pub fn hirzebruch_through_with(
        &self,
        hirz_base: &ClassExpr,
        drop_base_overflow: bool,
    ) -> ClassExpr {
        let ring = self.ring();
        let y = ring.sym("y").expect("genus symbol declared");
        let inv_one_plus_y = (&ring.one() + &y).invert_unit().expect("unit");
        let kill = |c: ClassExpr| {
            if drop_base_overflow {
                c.kill_base_overflow(self.base_dim)
            } else {
                c
            }
        };
        let mut acc = kill(self.ambient.hirzebruch_ambient(hirz_base));
        for step in &self.steps {
            let e = ring.sym(&step.exc).expect("exceptional symbol declared");
            let mut factor = hirzebruch_line(&LineClass::new(e.clone()).expect("degree 1"));
            for u in step.center.classes() {
                let shifted = LineClass::new(u - &e).expect("degree 1");
                factor = &factor * &hirzebruch_line(&shifted);
                let plain = LineClass::new(u.clone()).expect("degree 1");
                factor = &factor * &hirzebruch_line_inverse(&plain);
            }
            factor = &factor * &inv_one_plus_y;
            acc = kill(&acc * &factor);
        }
        acc
    }

    /// One step's multiplier of the total class, in the requested flavor.
    fn step_factor(&self, step: &BlowupStep, flavor: Flavor) -> ClassExpr {
        let ring = self.ring();
        let one = ring.one();
        let e = ring.sym(&step.exc).expect("exceptional symbol declared");
        match flavor {
            Flavor::Chern => {
                let mut factor = &one + &e;
                for u in step.center.classes() {
                    factor = &factor * &(&(&one + u) - &e);
                    factor = &factor * &(&one + u).invert_unit().expect("constant term 1");
                }
                factor
            }
            Flavor::Hirzebruch => {
                let y = ring.sym("y").expect("genus symbol declared");
                let mut factor = hirzebruch_line(&LineClass::new(e.clone()).expect("degree 1"));
                for u in step.center.classes() {
                    let shifted = LineClass::new(u - &e).expect("degree 1");
                    factor = &factor * &hirzebruch_line(&shifted);
                    let plain = LineClass::new(u.clone()).expect("degree 1");
                    factor = &factor * &hirzebruch_line_inverse(&plain);
                }
                &factor * &(&one + &y).invert_unit().expect("unit")
            }
        }
    }

    /// Class of the resolved hypersurface pushed all the way down to the
    /// ambient projective bundle: hypersurface adjunction with the proper
    /// transform class, then one blowdown per step in reverse order
    /// (innermost blowup first). The result is free of exceptional symbols.
    pub fn resolved_class_in_ambient(&self, flavor: Flavor) -> Result<ClassExpr> {
        self.resolved_class_in_ambient_with(flavor, true)
    }

    /// As [`Tower::resolved_class_in_ambient`], with the base-overflow drop
    /// switchable so tests can confirm it never changes a base result.
    ///
    /// The total class is the ambient class times every step factor times
    /// the adjunction factor of the proper transform. Each step factor is
    /// a pullback for every later blowup, so the projection formula lets
    /// it join the product right before its own blowdown; the ambient
    /// class joins last, once all exceptional symbols are gone. This keeps
    /// the intermediate products small.
    pub fn resolved_class_in_ambient_with(
        &self,
        flavor: Flavor,
        drop_base_overflow: bool,
    ) -> Result<ClassExpr> {
        let kill = |c: ClassExpr| {
            if drop_base_overflow {
                c.kill_base_overflow(self.base_dim)
            } else {
                c
            }
        };
        let w = self.proper_transform_class();
        let one = self.ring().one();
        let mut cls = match flavor {
            Flavor::Chern => hypersurface_chern_pushed(&one, &w),
            Flavor::Hirzebruch => hirzebruch_hypersurface_pushed(&one, &w),
        };
        cls = kill(cls);
        for step in self.steps.iter().rev() {
            cls = kill(&cls * &self.step_factor(step, flavor));
            cls = kill(blowdown(&cls, &step.exc, &step.center)?);
        }
        let ambient_cls = match flavor {
            Flavor::Chern => self.ambient.chern_ambient(),
            Flavor::Hirzebruch => self.ambient.hirzebruch_ambient(&self.ring().one()),
        };
        Ok(kill(&kill(ambient_cls) * &cls))
    }
}

// ---------------------------------------------------------------------------
// Built-in towers
// ---------------------------------------------------------------------------

fn standard_table(base_dim: u32, exceptional_count: u32) -> ChowRing {
    let mut entries = vec![
        SymbolEntry::new("H", 1, Role::Fiber),
        SymbolEntry::new("L", 1, Role::Base),
        SymbolEntry::new("D", 1, Role::Base),
    ];
    for k in 1..=base_dim {
        entries.push(SymbolEntry::new(&format!("c{k}"), k, Role::Base));
    }
    for i in 1..=exceptional_count {
        entries.push(SymbolEntry::new(&format!("E{i}"), 1, Role::Exceptional));
    }
    entries.push(SymbolEntry::new("y", 0, Role::Genus));
    let table = SymbolTable::build(entries).expect("standard table is valid");
    ChowRing::new(table, base_dim + 2, default_y_cutoff(base_dim))
}

/// Build a built-in tower. The resolution data is valid for bases of
/// dimension at most three.
pub fn builtin_tower(kind: ModelKind, base_dim: u32) -> Result<Tower> {
    builtin_tower_with_y_cutoff(kind, base_dim, default_y_cutoff(base_dim))
}

/// Same as [`builtin_tower`] with an explicit y-truncation order.
pub fn builtin_tower_with_y_cutoff(kind: ModelKind, base_dim: u32, y_cutoff: u32) -> Result<Tower> {
    if !(1..=3).contains(&base_dim) {
        return Err(Error::BadTower(format!(
            "base dimension {base_dim} out of range (the resolutions are valid up to \
             codimension three in the base)"
        )));
    }
    if let ModelKind::Su5 { resolution } = kind {
        if !(1..=6).contains(&resolution) {
            return Err(Error::BadTower(format!(
                "su5 resolution {resolution} out of range 1..=6"
            )));
        }
    }
    let exceptional_count = match kind {
        ModelKind::Smooth => 0,
        ModelKind::Su5 { .. } => 4,
        ModelKind::So10 => 5,
        ModelKind::E6 => 7,
    };
    let mut ring = standard_table(base_dim, exceptional_count);
    ring.y_cutoff = y_cutoff;
    let ambient = AmbientModel::new(ring.clone(), base_dim, (2, 3))?;
    let h = ring.sym("H")?;
    let l = ring.sym("L")?;
    let d = ring.sym("D")?;
    let hypersurface = &h.scale(3) + &l.scale(6);
    let e = |i: u32| ring.sym(&format!("E{i}")).expect("exceptional symbol declared");

    let mut steps: Vec<BlowupStep> = Vec::new();
    let mut push = |exc: u32, classes: Vec<ClassExpr>, multiplicity: u32| -> Result<()> {
        steps.push(BlowupStep {
            exc: format!("E{exc}"),
            center: Center::new(classes)?,
            multiplicity,
        });
        Ok(())
    };

    match kind {
        ModelKind::Smooth => {}
        ModelKind::Su5 { resolution } => {
            let xl2 = &h + &l.scale(2); // [x]
            let yl3 = &h + &l.scale(3); // [y]
            push(1, vec![xl2.clone(), yl3.clone(), d.clone()], 2)?;
            push(2, vec![&xl2 - &e(1), &yl3 - &e(1), e(1)], 2)?;
            let x2 = &(&xl2 - &e(1)) - &e(2);
            let y2 = &(&yl3 - &e(1)) - &e(2);
            let choices: [(ClassExpr, ClassExpr); 6] = [
                (e(2), &e(1) - &e(2)),
                (e(2), &x2.scale(3) + &e(2)),
                (&e(1) - &e(2), e(2)),
                (&e(1) - &e(2), &x2.scale(3) + &e(2)),
                (&x2.scale(3) + &e(2), e(2)),
                (&x2.scale(3) + &e(2), &e(1) - &e(2)),
            ];
            let (u, v) = choices[(resolution - 1) as usize].clone();
            push(3, vec![y2.clone(), u], 1)?;
            push(4, vec![y2, v], 1)?;
        }
        ModelKind::So10 => {
            let xl2 = &h + &l.scale(2);
            let yl3 = &h + &l.scale(3);
            push(1, vec![xl2.clone(), yl3.clone(), d.clone()], 2)?;
            push(2, vec![&xl2 - &e(1), &yl3 - &e(1), e(1)], 2)?;
            let y2 = &(&yl3 - &e(1)) - &e(2);
            push(3, vec![y2.clone(), &e(1) - &e(2), e(2)], 2)?;
            push(4, vec![&y2 - &e(3), &(&e(1) - &e(2)) - &e(3)], 1)?;
            push(5, vec![&(&y2 - &e(3)) - &e(4), &e(2) - &e(3)], 1)?;
        }
        ModelKind::E6 => {
            let xl2 = &h + &l.scale(2);
            let yl3 = &h + &l.scale(3);
            push(1, vec![xl2.clone(), yl3.clone(), d.clone()], 2)?;
            push(2, vec![&xl2 - &e(1), &yl3 - &e(1), e(1)], 2)?;
            let y2 = &(&yl3 - &e(1)) - &e(2);
            push(3, vec![y2.clone(), &e(1) - &e(2), e(2)], 2)?;
            push(4, vec![&y2 - &e(3), &(&e(1) - &e(2)) - &e(3), e(3)], 2)?;
            let y4 = &(&y2 - &e(3)) - &e(4);
            push(5, vec![y4.clone(), &e(2) - &e(3)], 1)?;
            push(6, vec![&y4 - &e(5), &e(3) - &e(4)], 1)?;
            push(
                7,
                vec![&(&y4 - &e(5)) - &e(6), &(&(&e(1) - &e(2)) - &e(3)) - &e(4)],
                1,
            )?;
        }
    }

    let tower = Tower {
        name: kind.label(),
        base_dim,
        ambient,
        steps,
        hypersurface,
    };
    tower.validate()?;
    Ok(tower)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
