//! Jacobi diagrams: vertex-oriented trivalent graphs with either univalent
//! legs (space `B`) or external vertices on one oriented circle (space `A`).
//!
//! A diagram is stored on half-edges. Every half-edge sits either in an
//! internal vertex triple, in the leg list or on the skeleton circle, and
//! `partner` pairs half-edges into edges. The cyclic order of a triple is
//! the vertex orientation.

mod canon;
mod enumerate;
mod json;
pub mod named;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;

pub use canon::{canonicalize, is_isomorphic, CanonicalForm};
pub use enumerate::{enumerate_diagrams, enumerate_with, EnumerateOptions};
pub use json::RawDiagram;

pub(crate) const OPEN: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    /// Diagrams on a preferred oriented circle.
    A,
    /// Uni-trivalent diagrams with free legs.
    B,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::A => "A",
            Space::B => "B",
        })
    }
}

/// Vertex counts of a diagram. `l` is zero in `A`, `e` is zero in `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grading {
    pub v: usize,
    pub l: usize,
    pub e: usize,
}

impl Grading {
    pub fn a(v: usize, e: usize) -> Self {
        Grading { v, l: 0, e }
    }

    pub fn b(v: usize, l: usize) -> Self {
        Grading { v, l, e: 0 }
    }

    /// Total vertex count; twice the degree used elsewhere in the literature.
    pub fn total(&self) -> usize {
        self.v + self.l + self.e
    }

    /// Number of half-edges a diagram of this grading carries.
    pub fn half_edges(&self) -> usize {
        3 * self.v + self.l + self.e
    }

    pub fn piece(&self, space: Space) -> Piece {
        match space {
            Space::A => Piece::A { total: self.total() },
            Space::B => Piece::B { v: self.v, l: self.l },
        }
    }
}

/// A graded piece of the quotient algebras. STU mixes internal and external
/// vertex counts, so pieces of `A` are indexed by total degree only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "space")]
pub enum Piece {
    A { total: usize },
    B { v: usize, l: usize },
}

impl Piece {
    pub fn space(&self) -> Space {
        match self {
            Piece::A { .. } => Space::A,
            Piece::B { .. } => Space::B,
        }
    }

    pub fn total(&self) -> usize {
        match *self {
            Piece::A { total } => total,
            Piece::B { v, l } => v + l,
        }
    }

    /// Every diagram grading that lands in this piece.
    pub fn gradings(&self) -> Vec<Grading> {
        match *self {
            Piece::A { total } => (0..=total)
                .map(|v| Grading::a(v, total - v))
                .filter(|g| g.half_edges() % 2 == 0)
                .collect(),
            Piece::B { v, l } => {
                let g = Grading::b(v, l);
                if g.half_edges().is_multiple_of(2) {
                    vec![g]
                } else {
                    vec![]
                }
            }
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::A { total } => write!(f, "A^{total}"),
            Piece::B { v, l } => write!(f, "B^({v},{l})"),
        }
    }
}

/// A validated diagram with dense half-edge ids `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    pub(crate) space: Space,
    pub(crate) internal: Vec<[u32; 3]>,
    pub(crate) legs: Vec<u32>,
    pub(crate) skeleton: Vec<u32>,
    pub(crate) partner: Vec<u32>,
    pub(crate) free_loops: u32,
}

impl Diagram {
    pub fn space(&self) -> Space {
        self.space
    }

    pub fn internal(&self) -> &[[u32; 3]] {
        &self.internal
    }

    pub fn legs(&self) -> &[u32] {
        &self.legs
    }

    /// External vertices in circle order; `None` outside space `A`.
    pub fn skeleton(&self) -> Option<&[u32]> {
        match self.space {
            Space::A => Some(&self.skeleton),
            Space::B => None,
        }
    }

    pub fn partner(&self, h: u32) -> u32 {
        self.partner[h as usize]
    }

    pub fn half_edge_count(&self) -> usize {
        self.partner.len()
    }

    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }

    pub fn grading(&self) -> Grading {
        Grading {
            v: self.internal.len(),
            l: self.legs.len(),
            e: self.skeleton.len(),
        }
    }

    pub fn piece(&self) -> Piece {
        self.grading().piece(self.space)
    }

    /// Edges as `(low, high)` half-edge pairs, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        (0..self.partner.len() as u32)
            .filter(|&h| h < self.partner[h as usize])
            .map(|h| (h, self.partner[h as usize]))
            .collect()
    }

    /// Which internal vertex owns each half-edge, if any.
    pub(crate) fn vertex_of(&self) -> Vec<Option<usize>> {
        let mut owner = vec![None; self.partner.len()];
        for (i, t) in self.internal.iter().enumerate() {
            for &h in t {
                owner[h as usize] = Some(i);
            }
        }
        owner
    }

    /// The empty diagram, unit of `B`.
    pub fn empty() -> Self {
        Diagram {
            space: Space::B,
            internal: vec![],
            legs: vec![],
            skeleton: vec![],
            partner: vec![],
            free_loops: 0,
        }
    }

    /// The circle with nothing attached, unit of `A`.
    pub fn bare_circle() -> Self {
        Diagram {
            space: Space::A,
            ..Diagram::empty()
        }
    }

    /// A single edge with two legs.
    pub fn strut() -> Self {
        Diagram {
            space: Space::B,
            internal: vec![],
            legs: vec![0, 1],
            skeleton: vec![],
            partner: vec![1, 0],
            free_loops: 0,
        }
    }

    /// The circle with one chord.
    pub fn chord() -> Self {
        Diagram {
            space: Space::A,
            internal: vec![],
            legs: vec![],
            skeleton: vec![0, 1],
            partner: vec![1, 0],
            free_loops: 0,
        }
    }

    /// The theta graph: two internal vertices `(0,1,2)` and `(3,4,5)` joined
    /// by the edges `0-3`, `1-4`, `2-5`.
    pub fn theta() -> Self {
        Diagram {
            space: Space::B,
            internal: vec![[0, 1, 2], [3, 4, 5]],
            legs: vec![],
            skeleton: vec![],
            partner: vec![3, 4, 5, 0, 1, 2],
            free_loops: 0,
        }
    }

    /// A lone vertex-free loop.
    pub fn free_loop() -> Self {
        Diagram {
            free_loops: 1,
            ..Diagram::empty()
        }
    }

    /// The wheel with `k` spokes: a `k`-cycle of internal vertices, each
    /// oriented as (previous rim, next rim, spoke), with one leg per spoke.
    pub fn wheel(k: usize) -> Result<Self, DiagramError> {
        if k == 0 || k % 2 == 1 {
            return Err(DiagramError::WheelSize(k));
        }
        let k32 = k as u32;
        let mut sk = Sketch::new(Space::B);
        for i in 0..k32 {
            let (prev, next, spoke) = (3 * i, 3 * i + 1, 3 * i + 2);
            sk.internal.push([prev, next, spoke]);
            let leg = 3 * k32 + i;
            sk.legs.push(leg);
            sk.pair(spoke, leg);
            sk.pair(next, 3 * ((i + 1) % k32));
        }
        Ok(sk.build())
    }

    /// The same diagram with one vertex orientation reversed.
    pub fn flip_vertex(&self, i: usize) -> Self {
        let mut d = self.clone();
        d.internal[i].swap(1, 2);
        d
    }

    pub(crate) fn to_sketch(&self) -> Sketch {
        Sketch {
            space: self.space,
            internal: self.internal.clone(),
            legs: self.legs.clone(),
            skeleton: self.skeleton.clone(),
            partner: (0..self.partner.len() as u32)
                .map(|h| (h, self.partner[h as usize]))
                .collect(),
            free_loops: self.free_loops,
        }
    }

    /// Applies a relabeling of half-edges and reorders vertices, legs and
    /// skeleton start without changing the diagram up to isomorphism.
    /// `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[u32], vertex_rot: &[usize], vertex_order: &[usize], skel_shift: usize) -> Self {
        let mut sk = Sketch::new(self.space);
        for &i in vertex_order {
            let t = self.internal[i];
            let r = vertex_rot.get(i).copied().unwrap_or(0) % 3;
            sk.internal.push([
                perm[t[r] as usize],
                perm[t[(r + 1) % 3] as usize],
                perm[t[(r + 2) % 3] as usize],
            ]);
        }
        sk.legs = self.legs.iter().rev().map(|&h| perm[h as usize]).collect();
        let e = self.skeleton.len();
        sk.skeleton = (0..e).map(|i| perm[self.skeleton[(i + skel_shift) % e.max(1)] as usize]).collect();
        for (h, &p) in self.partner.iter().enumerate() {
            sk.partner.insert(perm[h], if p == OPEN { OPEN } else { perm[p as usize] });
        }
        sk.free_loops = self.free_loops;
        sk.build()
    }
}

/// Mutable diagram under construction, with arbitrary half-edge labels.
#[derive(Clone, Debug)]
pub(crate) struct Sketch {
    pub space: Space,
    pub internal: Vec<[u32; 3]>,
    pub legs: Vec<u32>,
    pub skeleton: Vec<u32>,
    pub partner: HashMap<u32, u32>,
    pub free_loops: u32,
}

impl Sketch {
    pub fn new(space: Space) -> Self {
        Sketch {
            space,
            internal: vec![],
            legs: vec![],
            skeleton: vec![],
            partner: HashMap::new(),
            free_loops: 0,
        }
    }

    pub fn pair(&mut self, a: u32, b: u32) {
        self.partner.insert(a, b);
        self.partner.insert(b, a);
    }

    /// Largest label in use plus one.
    pub fn next_label(&self) -> u32 {
        self.partner.keys().copied().max().map_or(0, |m| m + 1)
    }

    /// Removes legs `a` and `b` and joins whatever they were attached to.
    /// Two ends of the same strut close up into a free loop.
    pub fn glue_legs(&mut self, a: u32, b: u32) {
        let pa = self.partner[&a];
        let pb = self.partner[&b];
        self.legs.retain(|&h| h != a && h != b);
        self.partner.remove(&a);
        self.partner.remove(&b);
        if pa == b {
            self.free_loops += 1;
        } else {
            self.pair(pa, pb);
        }
    }

    /// Compacts labels to `0..n` preserving their relative order.
    pub fn build(self) -> Diagram {
        let mut labels: Vec<u32> = self.partner.keys().copied().collect();
        labels.sort_unstable();
        let index: HashMap<u32, u32> = labels.iter().enumerate().map(|(i, &h)| (h, i as u32)).collect();
        let map = |h: &u32| index[h];
        let partner = labels
            .iter()
            .map(|h| {
                let p = self.partner[h];
                if p == OPEN {
                    OPEN
                } else {
                    index[&p]
                }
            })
            .collect();
        Diagram {
            space: self.space,
            internal: self.internal.iter().map(|t| [map(&t[0]), map(&t[1]), map(&t[2])]).collect(),
            legs: self.legs.iter().map(map).collect(),
            skeleton: self.skeleton.iter().map(map).collect(),
            partner,
            free_loops: self.free_loops,
        }
    }
}

/// Checks a raw description and returns the diagram it describes.
pub fn validate(raw: &RawDiagram) -> Result<Diagram, DiagramError> {
    raw.validate()
}
