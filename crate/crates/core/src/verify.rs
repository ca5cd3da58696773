//! Verification suites: relation vanishing under a weight system, the
//! symmetrization isomorphism, the closure of the wheels element and
//! wheeling multiplicativity.

use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{generate_ihx_with, generate_stu_with, primitive_row, BasisStore, DiagramVector, Echelon};
use crate::diagram::{canonicalize, enumerate_with, Diagram, EnumerateOptions, Grading, Piece, Space};
use crate::error::Result;
use crate::lie::WeightSystem;
use crate::maps::{chi, closure, disjoint_union, exp_truncated, omega, verify_wheeling};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

/// One row of the symmetrization rank table.
#[derive(Clone, Debug, Serialize)]
pub struct RankRow {
    pub total: usize,
    pub dim_b: usize,
    pub dim_a: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ranks: Vec<RankRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    fn new(suite: &str) -> Self {
        Report {
            suite: suite.into(),
            passed: true,
            checks: vec![],
            ranks: vec![],
            notes: vec![],
        }
    }

    /// Runs one check; errors become a failed check and the suite goes on.
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        let start = Instant::now();
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("{}: {e}", e.code())));
        self.passed &= passed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
            millis: start.elapsed().as_millis(),
        });
    }
}

fn all_zero(ws: &WeightSystem, rels: &[DiagramVector]) -> Result<(bool, String)> {
    let bad: Vec<Result<bool>> = rels.par_iter().map(|r| Ok(!ws.evaluate_vector(r)?.is_zero())).collect();
    let mut failures = 0;
    for b in bad {
        failures += b? as usize;
    }
    Ok((failures == 0, format!("{} generators, {failures} nonzero", rels.len())))
}

/// Every vertex flip negates the value, and values follow canonical signs.
fn antisymmetry(ws: &WeightSystem, space: Space, g: Grading, opts: &EnumerateOptions) -> Result<(bool, String)> {
    let seeds = enumerate_with(space, g, &EnumerateOptions { include_zero: true, ..opts.clone() })?;
    let outcomes: Vec<Result<usize>> = seeds
        .par_iter()
        .map(|c| {
            let d = &c.diagram;
            let base = ws.evaluate(d)?;
            let mut bad = usize::from(c.sign == 0 && !base.is_zero());
            for i in 0..d.internal().len() {
                let flipped = d.flip_vertex(i);
                let sign = canonicalize(&flipped).sign;
                let value = ws.evaluate(&flipped)?;
                bad += usize::from(&value + &base != Rational::zero() || (sign == 0 && !value.is_zero()));
            }
            Ok(bad)
        })
        .collect();
    let mut failures = 0;
    for o in outcomes {
        failures += o?;
    }
    Ok((failures == 0, format!("{} diagrams, {failures} violations", seeds.len())))
}

/// Relation generators of total degree up to `max_total` evaluate to zero:
/// in `A` with `ws_a`, closed `B` pieces with `ws_a` too, and legged `B`
/// pieces through `χ` up to `chi_total`.
pub fn verify_relations(ws: &WeightSystem, max_total: usize, chi_total: usize, opts: &EnumerateOptions) -> Report {
    let mut report = Report::new("relations");
    for total in (2..=max_total).step_by(2) {
        let piece = Piece::A { total };
        for g in piece.gradings() {
            report.run(format!("{piece} AS {g:?}"), || antisymmetry(ws, Space::A, g, opts));
            report.run(format!("{piece} IHX v={} e={}", g.v, g.e), || all_zero(ws, &generate_ihx_with(Space::A, g, opts)?.relations));
        }
        report.run(format!("{piece} STU"), || all_zero(ws, &generate_stu_with(Grading::a(0, total), opts)?.relations));
    }
    for v in (2..=max_total).step_by(2) {
        let g = Grading::b(v, 0);
        report.run(format!("B^({v},0) AS"), || antisymmetry(ws, Space::B, g, opts));
        report.run(format!("B^({v},0) IHX"), || all_zero(ws, &generate_ihx_with(Space::B, g, opts)?.relations));
    }
    for total in (2..=chi_total).step_by(2) {
        for v in (1..=total).filter(|v| (3 * v + total - v) % 2 == 0 && total - v > 0 && *v > 0) {
            let g = Grading::b(v, total - v);
            report.run(format!("chi B^({v},{}) IHX", total - v), || {
                let rels = generate_ihx_with(Space::B, g, opts)?
                    .relations
                    .iter()
                    .map(chi)
                    .collect::<Result<Vec<_>>>()?;
                all_zero(ws, &rels)
            });
        }
    }
    report
}

fn rank_of(rows: &[Vec<Rational>]) -> usize {
    let mut e = Echelon::default();
    for r in rows {
        let sparse: Vec<(usize, Rational)> = r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect();
        if !sparse.is_empty() {
            e.insert(primitive_row(&sparse));
        }
    }
    e.rank()
}

/// The matrix of `χ` between quotient bases, degree by degree.
pub fn verify_chi_iso(store: &BasisStore, max_total: usize) -> Report {
    let mut report = Report::new("chi-iso");
    for total in 0..=max_total {
        let mut row = None;
        report.run(format!("chi total {total}"), || {
            let a = store.get(Piece::A { total })?;
            let mut images = Vec::new();
            for v in 0..=total {
                let b = store.get(Piece::B { v, l: total - v })?;
                for i in 0..b.dimension() {
                    images.push(a.reduce(&chi(&b.basis_vector(i))?)?);
                }
            }
            let rank = rank_of(&images);
            let (dim_b, dim_a) = (images.len(), a.dimension());
            row = Some(RankRow { total, dim_b, dim_a, rank });
            Ok((dim_a == dim_b && rank == dim_a, format!("{dim_b} x {dim_a}, rank {rank}")))
        });
        report.ranks.extend(row);
    }
    report
}

fn theta() -> DiagramVector {
    DiagramVector::from_diagram(&Diagram::theta())
}

/// Coordinates of a closed vector in every `B^(v,0)` with even `v <= vmax`.
fn closed_coordinates(store: &BasisStore, x: &DiagramVector, vmax: usize) -> Result<Vec<Vec<Rational>>> {
    (0..=vmax)
        .step_by(2)
        .map(|v| {
            let piece = Piece::B { v, l: 0 };
            let part = x.pieces().remove(&piece).unwrap_or_else(|| DiagramVector::zero(Space::B));
            store.get(piece)?.reduce(&part)
        })
        .collect()
}

/// `cl(Ω)` against `exp(εΘ/24)` for a single global sign `ε`.
pub fn verify_closure_omega(store: &BasisStore, vmax: usize) -> Report {
    let mut report = Report::new("closure-omega");
    let mut cl = None;
    report.run(format!("closure of omega, vmax {vmax}"), || {
        let c = closure(&omega(vmax).vector)?;
        let n = c.len();
        cl = Some(c);
        Ok((true, format!("{n} closed terms")))
    });
    let Some(cl) = cl else {
        return report;
    };
    let cl_coords = match closed_coordinates(store, &cl, vmax) {
        Ok(c) => c,
        Err(e) => {
            report.run("reduce closure", || Err(e));
            return report;
        }
    };
    for eps in [1i64, -1] {
        report.run(format!("cl(omega) = exp({}theta/24)", if eps < 0 { "-" } else { "" }), || {
            let lhs = &cl_coords;
            let target = exp_truncated(&theta().scaled(&rational::rat(eps, 24)), vmax)?;
            let rhs = closed_coordinates(store, &target, vmax)?;
            let first_bad = (0..lhs.len()).find(|&k| lhs[k] != rhs[k]);
            Ok(match first_bad {
                None => (true, "equal modulo relations in every degree".into()),
                Some(k) => (false, format!("differ at v={}: {} vs {}", 2 * k, show(&lhs[k]), show(&rhs[k]))),
            })
        });
    }
    // exactly one global sign is allowed, so the suite passes if either does
    let signs: Vec<bool> = report.checks[1..].iter().map(|c| c.passed).collect();
    report.passed = report.checks[0].passed && signs.iter().any(|&p| p);
    report.notes.extend(exponential_fit(store, &cl_coords, vmax));
    report
}

/// Looks for `λ` with `cl(Ω) = exp(λΘ)`, reading `λ` off degree two.
fn exponential_fit(store: &BasisStore, lhs: &[Vec<Rational>], vmax: usize) -> Option<String> {
    let theta_coord = closed_coordinates(store, &theta(), 2).ok()?.pop()?;
    let lambda = lhs.get(1)?.first()? / theta_coord.first()?;
    let fitted = exp_truncated(&theta().scaled(&lambda), vmax).ok()?;
    let holds = closed_coordinates(store, &fitted, vmax).ok()? == lhs;
    Some(format!(
        "cl(omega) {} exp(({})theta) through v={vmax}",
        if holds { "equals" } else { "differs from" },
        rational::format(&lambda)
    ))
}

fn show(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(rational::format).collect();
    format!("[{}]", parts.join(", "))
}

/// Wheeling multiplicativity on the standard small pairs.
pub fn verify_wheeling_suite(store: &BasisStore) -> Report {
    let mut report = Report::new("wheeling");
    let one = DiagramVector::one(Space::B);
    let strut = DiagramVector::from_diagram(&Diagram::strut());
    let w2 = DiagramVector::from_diagram(&Diagram::wheel(2).expect("even"));
    for (name, a, b) in [("(empty, empty)", &one, &one), ("(strut, strut)", &strut, &strut), ("(w_2, strut)", &w2, &strut)] {
        report.run(format!("wheeling {name}"), || {
            let ok = verify_wheeling(store, a, b)?;
            let total = disjoint_union(a, b)?.terms().map(|(d, _)| d.grading().total()).max().unwrap_or(0);
            Ok((ok, format!("total degree {total}")))
        });
    }
    report
}
