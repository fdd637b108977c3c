//! The construction pipeline: certify a rank-0 seed curve, double its
//! rational point count with quadratic covers until at least `n + 4` points
//! exist, then attach the final cover whose function has simple zeros at the
//! `n` surviving points and takes the values a, b, ab, c at the others.
//!
//! Every cover function below the final one is a base-field function that is
//! 1 at all base rational points, so each tower level's rational points are
//! exactly the sign-choices over the seed torsion and the count doubles per
//! level. The final function is solved in the character-sector decomposition
//! `g = sum over sectors of u^sector * h_sector` where each `h_sector` lies
//! in an explicit base Riemann-Roch space with forced zeros at the earlier
//! ramification points; this confines the poles of `g` to the fiber above
//! the fresh final point and makes every condition exactly checkable.

use crate::arith::{ArithError, Place, Rational};
use crate::elliptic::{
    find_closed_point_from, selmer_rank_bound, CurvePoint, EllipticError,
    MordellWeilCertificate, QuadraticPoint, WeierstrassCurve,
};
use crate::funcfield::{
    rr_space, BaseFunction, BasePlace, Divisor, FuncFieldError, FunctionElement, TowerPoint,
};
use crate::linalg::{kernel_basis, solve, Matrix};
use crate::square_classes::{assemble, covers_place, SquareClassData, SquareClassError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForgeError {
    #[error("seed certification failed: {0}")]
    Seed(#[from] EllipticError),
    #[error("square-class assembly failed: {0}")]
    Classes(#[from] SquareClassError),
    #[error("function-field computation failed: {0}")]
    Func(#[from] FuncFieldError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("tower has {have} points, final cover needs at least {need}")]
    TooFewPoints { have: usize, need: usize },
    #[error("pole escalation exceeded order {0}; construction out of supported range")]
    EscalationExceeded(i64),
    #[error("internal consistency check failed: {0}")]
    InternalCheck(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverRole {
    Doubling,
    Final,
}

/// One double cover `u^2 = f`: the function, the base closed point whose
/// fiber carries the odd-order pole (so the cover ramifies there and stays
/// geometrically integral), and the pole order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStep {
    pub f: FunctionElement,
    #[serde(rename = "P")]
    pub ram_point: QuadraticPoint,
    pub pole_order: i64,
    pub role: CoverRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointRole {
    /// Ramified in the final cover: contributes exactly one rational point.
    Survivor,
    ValueA,
    ValueB,
    ValueAb,
    ValueC,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignatedPoint {
    pub point: TowerPoint,
    pub role: PointRole,
}

/// The output curve presented as its chain of double covers over the seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverTower<'a> {
    pub base: &'a WeierstrassCurve,
    pub covers: &'a [CoverStep],
    pub designated_points: &'a [DesignatedPoint],
}

/// A recomputable claim recorded during construction. The verifier
/// re-derives each one from the rest of the certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuditEntry {
    SeedTorsionCount { count: u64 },
    LevelPointCount { level: u32, count: u64 },
    /// Order of the cover function over its ramification point (odd, equal
    /// to minus the pole order). For the final cover this is certified by
    /// the pullback sector, which strictly dominates all other sectors.
    CoverPoleOrder { cover: u32, order: i64 },
    /// A doubling cover function takes the value 1 at every rational point
    /// of the level below.
    CoverValueOne { cover: u32, points: u64 },
    /// Cover function `cover` has order 0 at the ramification point of
    /// cover `at_cover` (freshness of the ramification loci).
    CoverRegular { cover: u32, at_cover: u32 },
    /// Base order of the final function's sector component at the final
    /// ramification point.
    SectorPoleOrder { sector: u32, order: i64 },
    FinalValue { point: u32, value: Rational },
    FinalZeroOrder { point: u32, order: i64 },
    /// At `place`, the named value among a, b, ab, c is a local square.
    LocalCoverage { place: Place, witness: String },
}

/// The machine-checkable record of the whole construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCertificate {
    pub schema: u32,
    pub n: u64,
    pub seed: WeierstrassCurve,
    pub mw: MordellWeilCertificate,
    pub covers: Vec<CoverStep>,
    pub designated_points: Vec<DesignatedPoint>,
    pub square_data: SquareClassData,
    pub audit: Vec<AuditEntry>,
}

pub const CERTIFICATE_SCHEMA: u32 = 1;

impl ConstructionCertificate {
    pub fn tower(&self) -> CoverTower<'_> {
        CoverTower {
            base: &self.seed,
            covers: &self.covers,
            designated_points: &self.designated_points,
        }
    }

    /// The doubling covers, i.e. all but the final one.
    pub fn doubling_covers(&self) -> &[CoverStep] {
        &self.covers[..self.covers.len().saturating_sub(1)]
    }

    pub fn final_cover(&self) -> Option<&CoverStep> {
        match self.covers.last() {
            Some(step) if step.role == CoverRole::Final => Some(step),
            _ => None,
        }
    }

    /// Functions of the doubling covers, in level order.
    pub fn doubling_functions(&self) -> Vec<FunctionElement> {
        self.doubling_covers().iter().map(|c| c.f.clone()).collect()
    }
}

/// Options for the pipeline; `None` fields take the deterministic defaults.
#[derive(Debug, Clone, Default)]
pub struct ForgeOptions {
    pub seed: Option<(Rational, Rational)>,
    pub classes: Option<(Rational, Rational)>,
}

/// Certifies the seed curve: rank bound 0 by descent, torsion by
/// Nagell-Lutz. The default seed is `y^2 = x^3 - x` with 4 rational points.
pub fn build_seed(
    seed: Option<(Rational, Rational)>,
) -> Result<(WeierstrassCurve, MordellWeilCertificate), ForgeError> {
    let (a, b) = seed.unwrap_or((Rational::zero(), Rational::from_int(-1)));
    let curve = WeierstrassCurve::new(a, b)?;
    let mw = selmer_rank_bound(&curve)?;
    Ok((curve, mw))
}

/// Working state of the tower under construction.
pub struct TowerBuilder {
    pub curve: WeierstrassCurve,
    pub covers: Vec<CoverStep>,
    /// Complete rational point list of the current level, canonically sorted.
    pub points: Vec<TowerPoint>,
    base_points: Vec<CurvePoint>,
}

impl TowerBuilder {
    pub fn new(curve: WeierstrassCurve, torsion: &[CurvePoint]) -> Self {
        let mut points: Vec<TowerPoint> =
            torsion.iter().cloned().map(TowerPoint::base_point).collect();
        points.sort();
        TowerBuilder {
            curve,
            covers: Vec::new(),
            points,
            base_points: torsion.to_vec(),
        }
    }

    pub fn level(&self) -> usize {
        self.covers.len()
    }

    fn cover_functions(&self) -> Vec<FunctionElement> {
        self.covers.iter().map(|c| c.f.clone()).collect()
    }

    /// Next unused degree-2 closed point whose fiber avoids the zeros and
    /// poles of every existing cover function.
    fn fresh_closed_point(&self) -> Result<QuadraticPoint, ForgeError> {
        let mut start = 2i64;
        'scan: loop {
            let p = find_closed_point_from(&self.curve, &[], start);
            start = next_integer_after(&p.x0);
            if self.covers.iter().any(|c| c.ram_point.x0 == p.x0) {
                continue;
            }
            for step in &self.covers {
                for (_, h) in sector_components(&step.f, self.level()) {
                    if h.order_at(&self.curve, &BasePlace::Quadratic(p.clone()))? != 0 {
                        continue 'scan;
                    }
                }
            }
            return Ok(p);
        }
    }

    /// Attaches one doubling cover: a base-field function with value 1 at
    /// every base rational point and a pole of odd order at a fresh
    /// degree-2 point. The level's rational point count doubles exactly.
    pub fn doubling_cover(&mut self) -> Result<(), ForgeError> {
        let ram = self.fresh_closed_point()?;
        let mut m = 3i64;
        let f = loop {
            if m > MAX_POLE_ORDER {
                return Err(ForgeError::EscalationExceeded(m));
            }
            match self.solve_doubling(&ram, m)? {
                Some(f) => break f,
                None => m += 2,
            }
        };
        self.covers.push(CoverStep {
            f: FunctionElement::Base(f),
            ram_point: ram,
            pole_order: m,
            role: CoverRole::Doubling,
        });
        let mut next = Vec::with_capacity(self.points.len() * 2);
        for p in &self.points {
            next.push(p.extend(1));
            next.push(p.extend(-1));
        }
        next.sort();
        self.points = next;
        Ok(())
    }

    fn solve_doubling(
        &self,
        ram: &QuadraticPoint,
        m: i64,
    ) -> Result<Option<BaseFunction>, ForgeError> {
        let divisor = Divisor::new(0, vec![(BasePlace::Quadratic(ram.clone()), m)]);
        let basis = rr_space(&self.curve, &divisor)?;
        let rows: Vec<Vec<Rational>> = self
            .base_points
            .iter()
            .map(|z| {
                basis
                    .iter()
                    .map(|h| h.evaluate(&self.curve, z))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let matrix = Matrix::from_rows(rows);
        let rhs = vec![Rational::one(); self.base_points.len()];
        let Some(solution) = solve(&matrix, &rhs) else {
            return Ok(None);
        };
        let combine = |coeffs: &[Rational]| {
            let mut f = BaseFunction::zero();
            for (c, h) in coeffs.iter().zip(&basis) {
                if !c.is_zero() {
                    f = f.add(&h.scale(c));
                }
            }
            f
        };
        let mut f = combine(&solution);
        let ram_place = BasePlace::Quadratic(ram.clone());
        if f.is_zero() || f.order_at(&self.curve, &ram_place)? != -m {
            // Steer the pole order to exactly m with a kernel element.
            let adjusted = kernel_basis(&matrix).into_iter().find_map(|k| {
                let kf = combine(&k);
                if kf.is_zero() {
                    return None;
                }
                match kf.order_at(&self.curve, &ram_place) {
                    Ok(ord) if ord == -m => Some(f.add(&kf)),
                    _ => None,
                }
            });
            match adjusted {
                Some(g) => f = g,
                None => return Ok(None),
            }
        }
        // Freshness both ways: the new function must not vanish at any
        // earlier ramification point.
        for step in &self.covers {
            if f.order_at(&self.curve, &BasePlace::Quadratic(step.ram_point.clone()))? != 0 {
                return Ok(None);
            }
        }
        for z in &self.base_points {
            if f.evaluate(&self.curve, z)? != Rational::one() {
                return Err(ForgeError::InternalCheck(format!(
                    "doubling function is not 1 at {z}"
                )));
            }
        }
        Ok(Some(f))
    }

    /// Solves and attaches the final cover for the given target count.
    /// Returns the designated points with their roles.
    pub fn final_cover(
        &mut self,
        n: u64,
        square_data: &SquareClassData,
    ) -> Result<Vec<DesignatedPoint>, ForgeError> {
        let need = n as usize + 4;
        if self.points.len() < need {
            return Err(ForgeError::TooFewPoints { have: self.points.len(), need });
        }
        let ab = &square_data.a * &square_data.b;
        let mut designated = Vec::with_capacity(self.points.len());
        for (i, point) in self.points.iter().enumerate() {
            let role = match i.checked_sub(n as usize) {
                None => PointRole::Survivor,
                Some(0) => PointRole::ValueA,
                Some(1) => PointRole::ValueB,
                Some(2) => PointRole::ValueAb,
                Some(_) => PointRole::ValueC,
            };
            designated.push(DesignatedPoint { point: point.clone(), role });
        }
        let target = move |role: PointRole, data: &SquareClassData| match role {
            PointRole::Survivor => Rational::zero(),
            PointRole::ValueA => data.a.clone(),
            PointRole::ValueB => data.b.clone(),
            PointRole::ValueAb => ab.clone(),
            PointRole::ValueC => data.c.clone(),
        };

        let ram = self.fresh_closed_point()?;
        let forced: Vec<(QuadraticPoint, i64)> = self
            .covers
            .iter()
            .map(|c| (c.ram_point.clone(), (c.pole_order + 1) / 2))
            .collect();
        let forced_total: i64 = forced.iter().map(|(_, c)| c).sum();
        let mut m = next_odd(forced_total + 5);
        let g = loop {
            if m > MAX_POLE_ORDER {
                return Err(ForgeError::EscalationExceeded(m));
            }
            let targets: Vec<Rational> = designated
                .iter()
                .map(|dp| target(dp.role, square_data))
                .collect();
            match self.solve_final(&ram, m, &designated, &targets, &forced)? {
                Some(g) => break g,
                None => m += 2,
            }
        };
        self.covers.push(CoverStep {
            f: g,
            ram_point: ram,
            pole_order: m,
            role: CoverRole::Final,
        });
        Ok(designated)
    }

    fn solve_final(
        &self,
        ram: &QuadraticPoint,
        m: i64,
        designated: &[DesignatedPoint],
        targets: &[Rational],
        forced: &[(QuadraticPoint, i64)],
    ) -> Result<Option<FunctionElement>, ForgeError> {
        let level = self.level();
        let sectors: u32 = 1 << level;
        let covers = self.cover_functions();

        // Basis of the search space, sector by sector.
        let mut basis: Vec<FunctionElement> = Vec::new();
        let mut zero_sector_len = 0usize;
        for mask in 0..sectors {
            let pole_bound = if mask == 0 { m } else { m - 2 };
            let mut entries = vec![(BasePlace::Quadratic(ram.clone()), pole_bound)];
            for (j, (point, c)) in forced.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    entries.push((BasePlace::Quadratic(point.clone()), -c));
                }
            }
            let sector_basis = rr_space(&self.curve, &Divisor::new(0, entries))?;
            if mask == 0 {
                zero_sector_len = sector_basis.len();
            }
            for h in sector_basis {
                basis.push(embed_sector(h, mask, level));
            }
        }

        // Linear conditions: exact values at value-carrying points; jet
        // coefficients (constant 0, linear 1) at survivors, forcing simple
        // zeros directly.
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut rhs: Vec<Rational> = Vec::new();
        for (dp, t) in designated.iter().zip(targets) {
            if dp.role == PointRole::Survivor {
                let mut row0 = Vec::with_capacity(basis.len());
                let mut row1 = Vec::with_capacity(basis.len());
                for b in &basis {
                    let series = b.expand_at(&self.curve, &covers, &dp.point, 4)?;
                    row0.push(series.coeff(0));
                    row1.push(series.coeff(1));
                }
                rows.push(row0);
                rhs.push(Rational::zero());
                rows.push(row1);
                rhs.push(Rational::one());
            } else {
                let row = basis
                    .iter()
                    .map(|b| b.evaluate(&self.curve, &covers, &dp.point))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(row);
                rhs.push(t.clone());
            }
        }
        let matrix = Matrix::from_rows(rows);
        let Some(mut solution) = solve(&matrix, &rhs) else {
            return Ok(None);
        };

        // The pullback sector must attain the pole order exactly (odd, and
        // strictly dominating every other sector's bound of m - 2), so the
        // cover ramifies above the fresh point.
        let ram_place = BasePlace::Quadratic(ram.clone());
        let sector_zero_fn = |coeffs: &[Rational]| {
            let mut h = BaseFunction::zero();
            for k in 0..zero_sector_len {
                if !coeffs[k].is_zero() {
                    if let FunctionElement::Base(b) = &basis[k] {
                        h = h.add(&b.scale(&coeffs[k]));
                    }
                }
            }
            h
        };
        let pole_exact = |h: &BaseFunction| -> Result<bool, ForgeError> {
            Ok(!h.is_zero() && h.order_at(&self.curve, &ram_place)? == -m)
        };
        let h0 = sector_zero_fn(&solution);
        if !pole_exact(&h0)? {
            let mut fixed = false;
            for k in kernel_basis(&matrix) {
                let kh = sector_zero_fn(&k);
                if !kh.is_zero() && pole_exact(&h0.add(&kh))? {
                    for (s, kv) in solution.iter_mut().zip(&k) {
                        *s += kv;
                    }
                    fixed = true;
                    break;
                }
            }
            if !fixed {
                return Ok(None);
            }
        }

        let mut g = FunctionElement::zero();
        for (c, b) in solution.iter().zip(&basis) {
            if !c.is_zero() {
                g = g.add(&b.scale(c));
            }
        }

        // Exact re-checks of everything the linear system promised.
        for (dp, t) in designated.iter().zip(targets) {
            if dp.role == PointRole::Survivor {
                let ord = g.order_at_tower_point(&self.curve, &covers, &dp.point)?;
                if ord != 1 {
                    return Ok(None);
                }
            } else {
                let value = g.evaluate(&self.curve, &covers, &dp.point)?;
                if &value != t {
                    return Err(ForgeError::InternalCheck(format!(
                        "final value mismatch at {}",
                        dp.point
                    )));
                }
            }
        }
        if !pole_exact(&sector_zero_fn(&solution))? {
            return Err(ForgeError::InternalCheck("pullback sector lost its pole".into()));
        }
        Ok(Some(g))
    }
}

const MAX_POLE_ORDER: i64 = 301;

fn next_odd(k: i64) -> i64 {
    if k % 2 == 0 {
        k + 1
    } else {
        k
    }
}

fn next_integer_after(x: &Rational) -> i64 {
    use num_traits::ToPrimitive;
    (x.numer().to_i64().unwrap_or(i64::MAX - 1)) + 1
}

/// Wraps a base function into the tower element `u^mask * h` at `level`.
pub fn embed_sector(h: BaseFunction, mask: u32, level: usize) -> FunctionElement {
    if level == 0 || mask == 0 {
        debug_assert!(level > 0 || mask == 0);
        return FunctionElement::Base(h);
    }
    let bit = 1u32 << (level - 1);
    if mask & bit != 0 {
        FunctionElement::Cover {
            lo: Box::new(FunctionElement::zero()),
            hi: Box::new(embed_sector(h, mask & !bit, level - 1)),
        }
    } else {
        FunctionElement::Cover {
            lo: Box::new(embed_sector(h, mask, level - 1)),
            hi: Box::new(FunctionElement::zero()),
        }
    }
}

/// Decomposes a level-`level` element into its character sectors: pairs
/// `(mask, h)` with `h` a base function and `mask` the set of cover square
/// roots multiplying it.
pub fn sector_components(f: &FunctionElement, level: usize) -> Vec<(u32, BaseFunction)> {
    let mut out: Vec<(u32, BaseFunction)> = Vec::new();
    collect_sectors(f, level, 0, &mut out);
    out.sort_by_key(|(mask, _)| *mask);
    let mut merged: Vec<(u32, BaseFunction)> = Vec::new();
    for (mask, h) in out {
        if let Some(last) = merged.last_mut() {
            if last.0 == mask {
                last.1 = last.1.add(&h);
                continue;
            }
        }
        merged.push((mask, h));
    }
    merged.retain(|(_, h)| !h.is_zero());
    merged
}

fn collect_sectors(
    f: &FunctionElement,
    level: usize,
    mask: u32,
    out: &mut Vec<(u32, BaseFunction)>,
) {
    match f {
        FunctionElement::Base(h) => {
            if !h.is_zero() {
                out.push((mask, h.clone()));
            }
        }
        FunctionElement::Cover { lo, hi } => {
            debug_assert!(level >= 1, "cover node below level 1");
            collect_sectors(lo, level - 1, mask, out);
            collect_sectors(hi, level - 1, mask | (1 << (level - 1)), out);
        }
    }
}

/// Runs the whole pipeline for a target count `n`.
pub fn forge(n: u64, options: &ForgeOptions) -> Result<ConstructionCertificate, ForgeError> {
    let (curve, mw) = build_seed(options.seed.clone())?;
    let mut builder = TowerBuilder::new(curve.clone(), &mw.torsion_points);
    while builder.points.len() < n as usize + 4 {
        builder.doubling_cover()?;
    }
    let (class_a, class_b) = options
        .classes
        .clone()
        .unwrap_or_else(crate::square_classes::independent_classes);
    let square_data = assemble(&class_a, &class_b)?;
    let designated = builder.final_cover(n, &square_data)?;

    let audit = compute_audit(
        &curve,
        &builder.covers,
        &mw.torsion_points,
        &designated,
        &square_data,
    )?;
    Ok(ConstructionCertificate {
        schema: CERTIFICATE_SCHEMA,
        n,
        seed: curve,
        mw,
        covers: builder.covers,
        designated_points: designated,
        square_data,
        audit,
    })
}

/// Recomputes the full audit from the certificate's other fields. The forge
/// records its output; the verifier recomputes it and demands equality, so
/// no recorded claim is ever taken on trust.
pub fn compute_audit(
    curve: &WeierstrassCurve,
    covers: &[CoverStep],
    torsion: &[CurvePoint],
    designated: &[DesignatedPoint],
    square_data: &SquareClassData,
) -> Result<Vec<AuditEntry>, ForgeError> {
    if covers.is_empty() {
        return Err(ForgeError::InternalCheck("no covers".into()));
    }
    let level_count = covers.len() - 1; // doubling levels
    let mut audit = Vec::new();
    audit.push(AuditEntry::SeedTorsionCount { count: torsion.len() as u64 });
    for level in 1..=level_count {
        audit.push(AuditEntry::LevelPointCount {
            level: level as u32,
            count: (torsion.len() << level) as u64,
        });
    }
    for (i, step) in covers.iter().enumerate() {
        let ram_place = BasePlace::Quadratic(step.ram_point.clone());
        match step.role {
            CoverRole::Doubling => {
                let FunctionElement::Base(f) = &step.f else {
                    return Err(ForgeError::InternalCheck(
                        "doubling cover is not a base function".into(),
                    ));
                };
                audit.push(AuditEntry::CoverPoleOrder {
                    cover: i as u32,
                    order: f.order_at(curve, &ram_place)?,
                });
                audit.push(AuditEntry::CoverValueOne {
                    cover: i as u32,
                    points: (torsion.len() << i) as u64,
                });
            }
            CoverRole::Final => {
                for (mask, h) in sector_components(&step.f, level_count) {
                    audit.push(AuditEntry::SectorPoleOrder {
                        sector: mask,
                        order: h.order_at(curve, &ram_place)?,
                    });
                }
                audit.push(AuditEntry::CoverPoleOrder {
                    cover: i as u32,
                    order: -step.pole_order,
                });
            }
        }
        for (j, other) in covers.iter().enumerate() {
            if i == j {
                continue;
            }
            let other_place = BasePlace::Quadratic(other.ram_point.clone());
            let regular = sector_components(&step.f, level_count)
                .iter()
                .all(|(_, h)| h.order_at(curve, &other_place).is_ok_and(|o| o == 0));
            if regular {
                audit.push(AuditEntry::CoverRegular { cover: i as u32, at_cover: j as u32 });
            }
        }
    }
    let final_step = covers.last().expect("nonempty");
    let doubling: Vec<FunctionElement> =
        covers[..covers.len() - 1].iter().map(|c| c.f.clone()).collect();
    for (idx, dp) in designated.iter().enumerate() {
        match dp.role {
            PointRole::Survivor => {
                let ord = final_step.f.order_at_tower_point(curve, &doubling, &dp.point)?;
                audit.push(AuditEntry::FinalZeroOrder { point: idx as u32, order: ord });
            }
            _ => {
                let value = final_step.f.evaluate(curve, &doubling, &dp.point)?;
                audit.push(AuditEntry::FinalValue { point: idx as u32, value });
            }
        }
    }
    let mut coverage_places: Vec<Place> = vec![Place::Infinity, Place::Finite(2)];
    coverage_places.extend(square_data.s.iter().cloned());
    coverage_places.sort();
    coverage_places.dedup();
    for v in coverage_places {
        if !covers_place(square_data, &v)? {
            return Err(ForgeError::InternalCheck(format!("no local square at {v}")));
        }
        let witness = local_square_witness(square_data, &v)?;
        audit.push(AuditEntry::LocalCoverage { place: v, witness });
    }
    Ok(audit)
}

/// Which of a, b, ab, c is a square in Q_v (first match in that order).
pub fn local_square_witness(
    data: &SquareClassData,
    v: &Place,
) -> Result<String, ForgeError> {
    let ab = &data.a * &data.b;
    for (value, name) in [
        (&data.a, "a"),
        (&data.b, "b"),
        (&ab, "ab"),
        (&data.c, "c"),
    ] {
        if crate::arith::is_local_square(value, v)? {
            return Ok(name.to_string());
        }
    }
    Err(ForgeError::InternalCheck(format!("no local square at {v}")))
}
