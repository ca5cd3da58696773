//! Exhaustive enumeration of diagrams of one grading, up to isomorphism.
//!
//! States are partially paired diagrams kept in canonical form. Each round
//! pairs the first open half-edge of every state with each other open
//! half-edge and deduplicates the results, so the number of live states is
//! the number of isomorphism classes of partial pairings.

use rayon::prelude::*;

use super::{canonicalize, CanonicalForm, Diagram, Grading, Space, OPEN};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Largest number of partial states allowed in any round.
    pub max_states: usize,
    /// Keep diagrams that are zero by antisymmetry (sign 0).
    pub include_zero: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            max_states: 2_000_000,
            include_zero: false,
        }
    }
}

/// All AS-nonzero canonical diagrams of the grading, sorted.
pub fn enumerate_diagrams(space: Space, g: Grading) -> Result<Vec<CanonicalForm>> {
    enumerate_with(space, g, &EnumerateOptions::default())
}

pub fn enumerate_with(space: Space, g: Grading, opts: &EnumerateOptions) -> Result<Vec<CanonicalForm>> {
    match space {
        Space::A if g.l > 0 => return Err(Error::Grading("diagrams in A have no legs".into())),
        Space::B if g.e > 0 => return Err(Error::Grading("diagrams in B have no skeleton".into())),
        _ => {}
    }
    let n = g.half_edges();
    if n % 2 == 1 {
        return Ok(vec![]);
    }

    let v = g.v as u32;
    let start = Diagram {
        space,
        internal: (0..v).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect(),
        legs: (3 * v..3 * v + g.l as u32).collect(),
        skeleton: (3 * v..3 * v + g.e as u32).collect(),
        partner: vec![OPEN; n],
        free_loops: 0,
    };
    let mut states = vec![canonicalize(&start).diagram];
    for _ in 0..n / 2 {
        let mut next: Vec<Diagram> = states
            .par_iter()
            .flat_map_iter(|d| {
                let open: Vec<u32> = (0..n as u32).filter(|&h| d.partner[h as usize] == OPEN).collect();
                let first = open[0];
                open[1..]
                    .iter()
                    .map(|&other| {
                        let mut e = d.clone();
                        e.partner[first as usize] = other;
                        e.partner[other as usize] = first;
                        canonicalize(&e).diagram
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        next.par_sort_unstable();
        next.dedup();
        if next.len() > opts.max_states {
            return Err(Error::Resource(format!(
                "enumeration of {space}{g:?} exceeded {} states",
                opts.max_states
            )));
        }
        states = next;
    }

    Ok(states
        .into_par_iter()
        .map(|d| {
            let sign = canonicalize(&d).sign;
            CanonicalForm { diagram: d, sign }
        })
        .filter(|c| opts.include_zero || c.sign != 0)
        .collect())
}
