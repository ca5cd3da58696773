//! Generators of the IHX and STU relation subspaces.
//!
//! Conventions, fixed once:
//! * IHX on the edge `h1-h2` between `u = (h1, a, b)` and `w = (h2, c, d)`:
//!   `[u=(h1,a,b), w=(h2,c,d)] + [u=(h1,b,c), w=(h2,a,d)] + [u=(h1,c,a), w=(h2,b,d)] = 0`,
//!   the three-term form of `I - H + X = 0` with `d` held fixed.
//! * STU at an internal vertex `(x, y, z)` whose `z` is attached to the
//!   circle at point `s`: `S - T + U = 0`, where `T` replaces `s` by the two
//!   points `x, y` in circle order and `U` by `y, x`.
//!
//! Antisymmetry is not a relation row: it is enforced by canonicalization.

use std::collections::BTreeSet;

use num_traits::One;
use rayon::prelude::*;

use super::DiagramVector;
use crate::diagram::{enumerate_with, Diagram, EnumerateOptions, Grading, Piece, Space};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct RelationSet {
    pub piece: Piece,
    pub relations: Vec<DiagramVector>,
}

fn seeds(space: Space, g: Grading, opts: &EnumerateOptions) -> Result<Vec<Diagram>> {
    let opts = EnumerateOptions {
        include_zero: true,
        ..opts.clone()
    };
    Ok(enumerate_with(space, g, &opts)?.into_iter().map(|c| c.diagram).collect())
}

fn one() -> Rational {
    Rational::one()
}

/// IHX relations among diagrams sharing the edge `h1-h2`, or `None` if the
/// edge does not join two distinct internal vertices.
pub fn ihx_at(d: &Diagram, h1: u32) -> Option<DiagramVector> {
    let owner = d.vertex_of();
    let h2 = d.partner(h1);
    let (iu, iw) = (owner[h1 as usize]?, owner[h2 as usize]?);
    if iu == iw {
        return None;
    }
    let rot = |t: [u32; 3], h: u32| {
        let k = t.iter().position(|&x| x == h).unwrap();
        (t[(k + 1) % 3], t[(k + 2) % 3])
    };
    let (a, b) = rot(d.internal[iu], h1);
    let (c, dd) = rot(d.internal[iw], h2);
    let mut out = DiagramVector::zero(d.space());
    for (u, w) in [([h1, a, b], [h2, c, dd]), ([h1, b, c], [h2, a, dd]), ([h1, c, a], [h2, b, dd])] {
        let mut e = d.clone();
        e.internal[iu] = u;
        e.internal[iw] = w;
        out.add_term(&e, one());
    }
    Some(out)
}

/// The STU relation at internal dart `z` attached to the circle, or `None`
/// if `z` is not such a dart.
pub fn stu_at(d: &Diagram, z: u32) -> Option<DiagramVector> {
    let skel = d.skeleton()?;
    let owner = d.vertex_of();
    let iu = owner[z as usize]?;
    let s = d.partner(z);
    let p = skel.iter().position(|&x| x == s)?;
    let t = d.internal[iu];
    let k = t.iter().position(|&x| x == z).unwrap();
    let (x, y) = (t[(k + 1) % 3], t[(k + 2) % 3]);

    let resolve = |first: u32, second: u32| {
        let mut sk = d.to_sketch();
        sk.internal.remove(iu);
        sk.partner.remove(&z);
        sk.partner.remove(&s);
        sk.skeleton.splice(p..=p, [first, second]);
        sk.build()
    };
    let mut out = DiagramVector::from_diagram(d);
    out.add_term(&resolve(x, y), -one());
    out.add_term(&resolve(y, x), one());
    Some(out)
}

/// Scales so the leading coefficient is one; used to deduplicate generators.
fn normalized(v: DiagramVector) -> DiagramVector {
    let lead = v.terms().next().map(|(_, c)| c.clone());
    match lead {
        Some(c) => v.scaled(&(one() / c)),
        None => v,
    }
}

fn collect(piece: Piece, found: Vec<DiagramVector>) -> RelationSet {
    let set: BTreeSet<Vec<(Diagram, Rational)>> = found
        .into_iter()
        .filter(|v| !v.is_zero())
        .map(|v| normalized(v).terms().map(|(d, c)| (d.clone(), c.clone())).collect())
        .collect();
    let relations = set
        .into_iter()
        .map(|terms| {
            let mut v = DiagramVector::zero(piece.space());
            for (d, c) in terms {
                v.add_canonical(d, c);
            }
            v
        })
        .collect();
    RelationSet { piece, relations }
}

/// IHX generators seeded by every diagram of grading `g`.
pub fn generate_ihx(space: Space, g: Grading) -> Result<RelationSet> {
    generate_ihx_with(space, g, &EnumerateOptions::default())
}

pub fn generate_ihx_with(space: Space, g: Grading, opts: &EnumerateOptions) -> Result<RelationSet> {
    let found = seeds(space, g, opts)?
        .par_iter()
        .flat_map_iter(|d| {
            let n = d.half_edge_count() as u32;
            (0..n).filter(|&h| h < d.partner(h)).filter_map(|h| ihx_at(d, h)).collect::<Vec<_>>()
        })
        .collect();
    Ok(collect(g.piece(space), found))
}

/// STU generators seeded by every diagram of total degree `g.total()` in `A`.
pub fn generate_stu(g: Grading) -> Result<RelationSet> {
    generate_stu_with(g, &EnumerateOptions::default())
}

pub fn generate_stu_with(g: Grading, opts: &EnumerateOptions) -> Result<RelationSet> {
    let piece = Piece::A { total: g.total() };
    let mut found = Vec::new();
    for sg in piece.gradings().into_iter().filter(|sg| sg.v > 0 && sg.e > 0) {
        let batch: Vec<DiagramVector> = seeds(Space::A, sg, opts)?
            .par_iter()
            .flat_map_iter(|d| {
                d.internal.iter().flatten().filter_map(|&z| stu_at(d, z)).collect::<Vec<_>>()
            })
            .collect();
        found.extend(batch);
    }
    Ok(collect(piece, found))
}

/// Every relation generator of a graded piece.
pub fn piece_relations(piece: Piece, opts: &EnumerateOptions) -> Result<RelationSet> {
    let mut all = Vec::new();
    for g in piece.gradings() {
        all.extend(generate_ihx_with(piece.space(), g, opts)?.relations);
    }
    if let Piece::A { total } = piece {
        all.extend(generate_stu_with(Grading::a(0, total), opts)?.relations);
    }
    let out = collect(piece, all);
    if out.relations.iter().any(|r| r.terms().any(|(d, _)| d.piece() != piece)) {
        return Err(Error::Grading(format!("relation left {piece}")));
    }
    Ok(out)
}

impl RelationSet {
    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }
}
