//! Small diagrams that come up by name.

use super::{Diagram, Sketch, Space};

/// Vertices `p, q, r, s` with double edges `p=q`, `r=s` and single edges
/// `p-r`, `q-s`; the closure of two glued 2-wheels.
pub fn doubled_ladder() -> Diagram {
    let mut sk = Sketch::new(Space::B);
    sk.internal = vec![[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11]];
    sk.pair(0, 3);
    sk.pair(1, 4);
    sk.pair(6, 9);
    sk.pair(7, 10);
    sk.pair(2, 8);
    sk.pair(5, 11);
    sk.build()
}

/// The complete graph on four trivalent vertices.
pub fn tetrahedron() -> Diagram {
    let mut sk = Sketch::new(Space::B);
    sk.internal = (0..4u32).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect();
    // vertex i uses slot j for its j-th neighbour in increasing order
    let slot = |i: u32, j: u32| {
        let others: Vec<u32> = (0..4).filter(|&k| k != i).collect();
        3 * i + others.iter().position(|&k| k == j).unwrap() as u32
    };
    for i in 0..4 {
        for j in i + 1..4 {
            sk.pair(slot(i, j), slot(j, i));
        }
    }
    sk.build()
}

/// One internal vertex `(x, y, z)` whose three darts land on the circle in
/// the order `x, y, z`.
pub fn mercedes() -> Diagram {
    let mut sk = Sketch::new(Space::A);
    sk.internal = vec![[0, 1, 2]];
    sk.skeleton = vec![3, 4, 5];
    sk.pair(0, 3);
    sk.pair(1, 4);
    sk.pair(2, 5);
    sk.build()
}

/// Two chords with interleaved endpoints.
pub fn crossed_chords() -> Diagram {
    chords(&[(0, 2), (1, 3)])
}

/// Two chords with nested endpoints.
pub fn parallel_chords() -> Diagram {
    chords(&[(0, 3), (1, 2)])
}

/// Chord diagram on `2k` circle points given as position pairs.
pub fn chords(pairs: &[(u32, u32)]) -> Diagram {
    let mut sk = Sketch::new(Space::A);
    sk.skeleton = (0..2 * pairs.len() as u32).collect();
    for &(a, b) in pairs {
        sk.pair(a, b);
    }
    sk.build()
}

/// The Wagner graph: an 8-cycle with its four long diagonals.
pub fn wagner() -> Diagram {
    let mut sk = Sketch::new(Space::B);
    sk.internal = (0..8u32).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect();
    for i in 0..8u32 {
        sk.pair(3 * i + 1, 3 * ((i + 1) % 8));
    }
    for i in 0..4u32 {
        sk.pair(3 * i + 2, 3 * (i + 4) + 2);
    }
    sk.build()
}
