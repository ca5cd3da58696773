//! Independent oracles shared by the integration tests. Nothing here calls
//! the canonical labeling or the contraction planner.
#![allow(dead_code)]

use jacobi_core::diagram::RawDiagram;
use jacobi_core::lie::{MetricLieAlgebra, Representation};
use jacobi_core::rational::{int, Rational};
use jacobi_core::{Diagram, Grading, Space};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Matrix = Vec<Vec<Rational>>;

fn inverse(m: &Matrix) -> Matrix {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { int(1) } else { int(0) }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular metric");
        a.swap(c, p);
        let s = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &s;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(int(0), |s, k| s + &a[i][k] * &b[k][j])).collect())
        .collect()
}

/// Brute-force contraction: sums over every index assignment of every edge,
/// skipping zero entries of the inverse metric.
pub fn naive_evaluate(d: &Diagram, g: &MetricLieAlgebra, rep: Option<&Representation>) -> Rational {
    let n = g.dim;
    let c_up = inverse(&g.metric);
    let f = |i: usize, j: usize, k: usize| -> Rational {
        (0..n).fold(int(0), |s, m| s + &g.structure_constants[m][i][j] * &g.metric[m][k])
    };
    let pairs: Vec<(usize, usize, Rational)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !c_up[i][j].is_zero())
        .map(|(i, j)| (i, j, c_up[i][j].clone()))
        .collect();
    let edges = d.edges();
    let mut idx = vec![0usize; d.half_edge_count()];
    let mut total = int(0);

    fn go(
        k: usize,
        weight: Rational,
        edges: &[(u32, u32)],
        pairs: &[(usize, usize, Rational)],
        idx: &mut Vec<usize>,
        leaf: &mut dyn FnMut(&[usize]) -> Rational,
        total: &mut Rational,
    ) {
        if k == edges.len() {
            *total += weight * leaf(idx);
            return;
        }
        let (a, b) = edges[k];
        for (i, j, c) in pairs {
            idx[a as usize] = *i;
            idx[b as usize] = *j;
            go(k + 1, &weight * c, edges, pairs, idx, leaf, total);
        }
    }

    let mut leaf = |idx: &[usize]| -> Rational {
        let mut v = int(1);
        for t in d.internal() {
            v *= f(idx[t[0] as usize], idx[t[1] as usize], idx[t[2] as usize]);
            if v.is_zero() {
                return v;
            }
        }
        if let (Some(skel), Some(r)) = (d.skeleton(), rep) {
            if !skel.is_empty() {
                let mut m = r.action[idx[skel[0] as usize]].clone();
                for &h in &skel[1..] {
                    m = mul(&m, &r.action[idx[h as usize]]);
                }
                v *= (0..r.dim).fold(int(0), |s, i| s + &m[i][i]);
            }
        }
        v
    };
    go(0, Rational::one(), &edges, &pairs, &mut idx, &mut leaf, &mut total);
    for _ in 0..d.free_loops() {
        total *= int(n as i64);
    }
    if let (Some(skel), Some(r)) = (d.skeleton(), rep) {
        if skel.is_empty() {
            total *= int(r.dim as i64);
        }
    }
    total
}

struct Nodes {
    /// Darts of each node; skeleton nodes come last in circle order.
    darts: Vec<Vec<u32>>,
    kind: Vec<u8>,
    skel: Vec<usize>,
}

fn nodes(d: &Diagram) -> Nodes {
    let mut darts: Vec<Vec<u32>> = d.internal().iter().map(|t| t.to_vec()).collect();
    let mut kind = vec![0u8; darts.len()];
    for &h in d.legs() {
        darts.push(vec![h]);
        kind.push(1);
    }
    let mut skel = Vec::new();
    for &h in d.skeleton().unwrap_or(&[]) {
        skel.push(darts.len());
        darts.push(vec![h]);
        kind.push(2);
    }
    Nodes { darts, kind, skel }
}

const PERMS: [([usize; 3], bool); 6] = [
    ([0, 1, 2], false),
    ([1, 2, 0], false),
    ([2, 0, 1], false),
    ([0, 2, 1], true),
    ([2, 1, 0], true),
    ([1, 0, 2], true),
];

/// Parities of all isomorphisms `d1 -> d2` found by exhaustive backtracking:
/// `(even exists, odd exists)`, odd meaning an odd number of vertex
/// orientations disagree.
pub fn iso_parities(d1: &Diagram, d2: &Diagram) -> (bool, bool) {
    if d1.space() != d2.space() || d1.grading() != d2.grading() || d1.free_loops() != d2.free_loops() {
        return (false, false);
    }
    let (n1, n2) = (nodes(d1), nodes(d2));
    let h = d1.half_edge_count();
    // visit nodes of d1 breadth-first from the skeleton so edges constrain early
    let mut node_of = vec![0usize; h];
    for (i, ds) in n1.darts.iter().enumerate() {
        for &x in ds {
            node_of[x as usize] = i;
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut seen = vec![false; n1.darts.len()];
    for &s in &n1.skel {
        seen[s] = true;
    }
    let mut queue: Vec<usize> = n1.skel.clone();
    let mut qi = 0;
    loop {
        while qi < queue.len() {
            let u = queue[qi];
            qi += 1;
            if n1.kind[u] != 2 {
                order.push(u);
            }
            for &x in &n1.darts[u] {
                let w = node_of[d1.partner(x) as usize];
                if !seen[w] {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
        match (0..n1.darts.len()).find(|&u| !seen[u]) {
            Some(u) => {
                seen[u] = true;
                queue.push(u);
            }
            None => break,
        }
    }

    struct St<'a> {
        d1: &'a Diagram,
        d2: &'a Diagram,
        n1: &'a Nodes,
        n2: &'a Nodes,
        order: Vec<usize>,
        map: Vec<u32>,
        used: Vec<bool>,
        found: (bool, bool),
    }
    const NONE: u32 = u32::MAX;

    impl St<'_> {
        fn consistent(&self, darts: &[u32]) -> bool {
            darts.iter().all(|&x| {
                let p = self.d1.partner(x);
                let mp = self.map[p as usize];
                mp == NONE || self.d2.partner(self.map[x as usize]) == mp
            })
        }

        fn go(&mut self, k: usize, odd: bool) {
            if self.found.0 && self.found.1 {
                return;
            }
            if k == self.order.len() {
                if odd {
                    self.found.1 = true;
                } else {
                    self.found.0 = true;
                }
                return;
            }
            let u = self.order[k];
            let src = self.n1.darts[u].clone();
            for w in 0..self.n2.darts.len() {
                if self.used[w] || self.n2.kind[w] != self.n1.kind[u] {
                    continue;
                }
                let dst = self.n2.darts[w].clone();
                let perms: &[([usize; 3], bool)] = if src.len() == 3 { &PERMS } else { &PERMS[..1] };
                for (p, flip) in perms {
                    for (i, &x) in src.iter().enumerate() {
                        self.map[x as usize] = dst[p[i]];
                    }
                    if self.consistent(&src) {
                        self.used[w] = true;
                        self.go(k + 1, odd ^ flip);
                        self.used[w] = false;
                    }
                    for &x in &src {
                        self.map[x as usize] = NONE;
                    }
                }
            }
        }
    }

    let e = n1.skel.len();
    let rotations = if e == 0 { 1 } else { e };
    let mut st = St {
        d1,
        d2,
        n1: &n1,
        n2: &n2,
        order,
        map: vec![NONE; h],
        used: vec![false; n2.darts.len()],
        found: (false, false),
    };
    for r in 0..rotations {
        st.map.iter_mut().for_each(|m| *m = NONE);
        st.used.iter_mut().for_each(|u| *u = false);
        for i in 0..e {
            let (a, b) = (n1.skel[i], n2.skel[(i + r) % e]);
            st.map[n1.darts[a][0] as usize] = n2.darts[b][0];
            st.used[b] = true;
        }
        let skel_darts: Vec<u32> = n1.skel.iter().map(|&a| n1.darts[a][0]).collect();
        if st.consistent(&skel_darts) {
            st.go(0, false);
        }
    }
    st.found
}

pub fn isomorphic(d1: &Diagram, d2: &Diagram) -> Option<i8> {
    match iso_parities(d1, d2) {
        (true, true) => Some(0),
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

pub fn as_zero(d: &Diagram) -> bool {
    iso_parities(d, d).1
}

/// Every labeled multigraph with the given degrees, as a symmetric matrix.
fn multigraphs(deg: &[usize], loops_ok: &[bool]) -> Vec<Vec<Vec<usize>>> {
    let n = deg.len();
    let mut out = Vec::new();
    let mut a = vec![vec![0usize; n]; n];
    let mut rem = deg.to_vec();

    fn fill(i: usize, j: usize, n: usize, a: &mut Vec<Vec<usize>>, rem: &mut Vec<usize>, loops_ok: &[bool], out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(a.clone());
            return;
        }
        if j == n {
            if rem[i] == 0 {
                fill(i + 1, i + 1, n, a, rem, loops_ok, out);
            }
            return;
        }
        if i == j {
            let max = if loops_ok[i] { rem[i] / 2 } else { 0 };
            for m in 0..=max {
                a[i][i] = m;
                rem[i] -= 2 * m;
                fill(i, j + 1, n, a, rem, loops_ok, out);
                rem[i] += 2 * m;
            }
            a[i][i] = 0;
        } else {
            for m in 0..=rem[i].min(rem[j]) {
                a[i][j] = m;
                a[j][i] = m;
                rem[i] -= m;
                rem[j] -= m;
                fill(i, j + 1, n, a, rem, loops_ok, out);
                rem[i] += m;
                rem[j] += m;
            }
            a[i][j] = 0;
            a[j][i] = 0;
        }
    }
    fill(0, 0, n, &mut a, &mut rem, loops_ok, &mut out);
    out
}

/// Realizes a multigraph with `v` trivalent nodes followed by univalent ones.
fn realize(space: Space, v: usize, u: usize, a: &[Vec<usize>]) -> Diagram {
    let mut free: Vec<Vec<u64>> = (0..v).map(|i| (0..3).map(|k| (3 * i + k) as u64).collect()).collect();
    free.extend((0..u).map(|j| vec![(3 * v + j) as u64]));
    let mut pairing = Vec::new();
    let n = v + u;
    for i in 0..n {
        for j in i..n {
            for _ in 0..a[i][j] {
                let x = free[i].pop().unwrap();
                let y = free[j].pop().unwrap();
                pairing.push([x, y]);
            }
        }
    }
    let uni: Vec<u64> = (0..u).map(|j| (3 * v + j) as u64).collect();
    let raw = RawDiagram {
        space,
        internal: (0..v).map(|i| [3 * i as u64, 3 * i as u64 + 1, 3 * i as u64 + 2]).collect(),
        legs: if space == Space::B { uni.clone() } else { vec![] },
        skeleton: if space == Space::A { Some(uni) } else { None },
        pairing,
        free_loops: 0,
    };
    raw.validate().expect("realized multigraph is a valid diagram")
}

/// Brute-force list of AS-nonzero diagrams up to isomorphism.
pub fn oracle_enumerate(space: Space, g: Grading) -> Vec<Diagram> {
    let u = g.l + g.e;
    if (3 * g.v + u) % 2 == 1 {
        return vec![];
    }
    let mut deg = vec![3; g.v];
    deg.extend(std::iter::repeat_n(1, u));
    let loops_ok: Vec<bool> = deg.iter().map(|&d| d == 3).collect();
    let mut reps: Vec<Diagram> = Vec::new();
    for a in multigraphs(&deg, &loops_ok) {
        let d = realize(space, g.v, u, &a);
        if reps.iter().any(|r| iso_parities(r, &d) != (false, false)) {
            continue;
        }
        reps.push(d);
    }
    reps.into_iter().filter(|d| !as_zero(d)).collect()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random diagram with uniformly random pairing and orientations.
pub fn random_diagram(rng: &mut StdRng, space: Space, v: usize, u: usize) -> Diagram {
    let n = 3 * v + u;
    assert!(n.is_multiple_of(2));
    let mut darts: Vec<u64> = (0..n as u64).collect();
    darts.shuffle(rng);
    let pairing = darts.chunks(2).map(|c| [c[0], c[1]]).collect();
    let uni: Vec<u64> = (3 * v..n).map(|x| x as u64).collect();
    let raw = RawDiagram {
        space,
        internal: (0..v)
            .map(|i| {
                let mut t = [3 * i as u64, 3 * i as u64 + 1, 3 * i as u64 + 2];
                t.shuffle(rng);
                t
            })
            .collect(),
        legs: if space == Space::B { uni.clone() } else { vec![] },
        skeleton: if space == Space::A { Some(uni) } else { None },
        pairing,
        free_loops: 0,
    };
    raw.validate().unwrap()
}

/// A random grading with an even number of half-edges: `(v, univalent)`.
pub fn random_shape(rng: &mut StdRng, max_total: usize) -> (usize, usize) {
    loop {
        let v = rng.gen_range(0..=max_total);
        let u = rng.gen_range(0..=max_total - v);
        if (3 * v + u) % 2 == 0 && 3 * v + u > 0 {
            return (v, u);
        }
    }
}

/// The same diagram under a random relabeling that keeps orientations.
pub fn random_relabel(rng: &mut StdRng, d: &Diagram) -> Diagram {
    let n = d.half_edge_count();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(rng);
    let v = d.internal().len();
    let rot: Vec<usize> = (0..v).map(|_| rng.gen_range(0..3)).collect();
    let mut order: Vec<usize> = (0..v).collect();
    order.shuffle(rng);
    let shift = rng.gen_range(0..=d.grading().e.max(1));
    d.relabel(&perm, &rot, &order, shift)
}
