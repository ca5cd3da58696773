//! Canonical labeling with orientation sign.
//!
//! Darts (half-edges) are first colored by iterated refinement over an
//! isomorphism-invariant signature. Each connected component is then
//! traversed breadth-first from every start dart of minimal color; at an
//! internal vertex the two remaining darts are ordered by color and the
//! search branches only on ties. The lexicographically least traversal code
//! labels the component. Every traversal also fixes a cyclic order at each
//! internal vertex, and the parity against the stored orientation is the
//! sign. If least codes are reached with both parities, an automorphism
//! reverses an odd number of vertices and the diagram is zero by AS.

use super::{Diagram, Space, OPEN};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub diagram: Diagram,
    /// `+1` or `-1` with `input = sign * diagram`, or `0` when AS forces zero.
    pub sign: i8,
}

const UNSET: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Internal = 0,
    Leg = 1,
    Skel = 2,
}

struct Layout<'a> {
    d: &'a Diagram,
    kind: Vec<Kind>,
    darts: Vec<[u32; 3]>,
    node_of: Vec<u32>,
    color: Vec<u32>,
    skel_next: Vec<u32>,
    skel_prev: Vec<u32>,
    /// Skeleton nodes in circle order.
    skel_nodes: Vec<u32>,
}

impl<'a> Layout<'a> {
    fn new(d: &'a Diagram) -> Self {
        let n = d.partner.len();
        let mut kind = Vec::new();
        let mut darts = Vec::new();
        let mut node_of = vec![0u32; n];
        for t in &d.internal {
            for &h in t {
                node_of[h as usize] = kind.len() as u32;
            }
            kind.push(Kind::Internal);
            darts.push(*t);
        }
        for &h in &d.legs {
            node_of[h as usize] = kind.len() as u32;
            kind.push(Kind::Leg);
            darts.push([h, UNSET, UNSET]);
        }
        let mut skel_nodes = Vec::new();
        let mut skel_next = vec![UNSET; n];
        let mut skel_prev = vec![UNSET; n];
        let e = d.skeleton.len();
        for (i, &h) in d.skeleton.iter().enumerate() {
            node_of[h as usize] = kind.len() as u32;
            skel_nodes.push(kind.len() as u32);
            kind.push(Kind::Skel);
            darts.push([h, UNSET, UNSET]);
            skel_next[h as usize] = d.skeleton[(i + 1) % e];
            skel_prev[h as usize] = d.skeleton[(i + e - 1) % e];
        }
        let color = (0..n).map(|h| kind[node_of[h] as usize] as u32).collect();
        let mut layout = Layout {
            d,
            kind,
            darts,
            node_of,
            color,
            skel_next,
            skel_prev,
            skel_nodes,
        };
        layout.refine();
        layout
    }

    fn arity(&self, node: u32) -> usize {
        match self.kind[node as usize] {
            Kind::Internal => 3,
            _ => 1,
        }
    }

    fn refine(&mut self) {
        let n = self.color.len();
        let mut classes = {
            let mut c = self.color.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        loop {
            let c = &self.color;
            let at = |h: u32| if h == UNSET || h == OPEN { u32::MAX } else { c[h as usize] };
            let sigs: Vec<[u32; 6]> = (0..n)
                .map(|h| {
                    let node = self.node_of[h] as usize;
                    let (s1, s2) = if self.kind[node] == Kind::Internal {
                        let others: Vec<u32> = self.darts[node].iter().filter(|&&x| x as usize != h).map(|&x| c[x as usize]).collect();
                        (others[0].min(others[1]), others[0].max(others[1]))
                    } else {
                        (u32::MAX, u32::MAX)
                    };
                    [c[h], at(self.d.partner[h]), s1, s2, at(self.skel_next[h]), at(self.skel_prev[h])]
                })
                .collect();
            let mut uniq = sigs.clone();
            uniq.sort_unstable();
            uniq.dedup();
            let stable = uniq.len() == classes;
            classes = uniq.len();
            self.color = sigs.iter().map(|s| uniq.binary_search(s).unwrap() as u32).collect();
            if stable {
                break;
            }
        }
    }

    /// Node sets of connected components, skeleton component first when the
    /// diagram lives in `A` (possibly with no nodes: the bare circle).
    fn components(&self) -> (Option<Vec<u32>>, Vec<Vec<u32>>) {
        let m = self.kind.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra.max(rb)] = ra.min(rb);
            }
        };
        for (h, &q) in self.d.partner.iter().enumerate() {
            if q != OPEN {
                union(&mut parent, self.node_of[h] as usize, self.node_of[q as usize] as usize);
            }
        }
        for w in self.skel_nodes.windows(2) {
            union(&mut parent, w[0] as usize, w[1] as usize);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<u32>> = Default::default();
        for x in 0..m {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().push(x as u32);
        }
        let mut skel = if self.d.space == Space::A { Some(vec![]) } else { None };
        let mut closed = Vec::new();
        for (_, nodes) in groups {
            if self.kind[nodes[0] as usize] == Kind::Skel || nodes.iter().any(|&x| self.kind[x as usize] == Kind::Skel) {
                skel = Some(nodes);
            } else {
                closed.push(nodes);
            }
        }
        (skel, closed)
    }
}

#[derive(Clone)]
struct Walk {
    new_node: Vec<u32>,
    new_dart: Vec<u32>,
    /// Old dart ids in new order.
    order: Vec<u32>,
    /// Old node ids in new order.
    nodes: Vec<u32>,
    odd: bool,
    /// Traversal code so far: node kinds as nodes are placed, and for each
    /// processed dart the new index of its partner.
    code: Vec<u32>,
    /// The code is already below the best prefix, so nothing can prune it.
    below: bool,
}

impl Walk {
    fn new(nodes: usize, darts: usize) -> Self {
        Walk {
            new_node: vec![UNSET; nodes],
            new_dart: vec![UNSET; darts],
            order: Vec::new(),
            nodes: Vec::new(),
            odd: false,
            code: Vec::new(),
            below: false,
        }
    }

    fn push_node(&mut self, node: u32, kind: Kind, darts: &[u32]) {
        self.new_node[node as usize] = self.nodes.len() as u32;
        self.nodes.push(node);
        for &h in darts {
            self.new_dart[h as usize] = self.order.len() as u32;
            self.order.push(h);
        }
        self.code.push(kind as u32);
    }
}

struct Best {
    code: Vec<u32>,
    walk: Option<Walk>,
    even: bool,
    odd: bool,
}

struct Search<'l, 'a> {
    layout: &'l Layout<'a>,
    best: Best,
}

impl Search<'_, '_> {
    /// Places `node` entered through `entry`; the second walk is the other
    /// choice when the remaining two darts are indistinguishable.
    fn place(&self, mut walk: Walk, node: u32, entry: u32) -> (Walk, Option<Walk>) {
        let l = self.layout;
        let kind = l.kind[node as usize];
        if kind != Kind::Internal {
            walk.push_node(node, kind, &[entry]);
            return (walk, None);
        }
        let t = l.darts[node as usize];
        let k = t.iter().position(|&x| x == entry).unwrap();
        let (n1, n2) = (t[(k + 1) % 3], t[(k + 2) % 3]);
        let (c1, c2) = (l.color[n1 as usize], l.color[n2 as usize]);
        if c1 < c2 {
            walk.push_node(node, kind, &[entry, n1, n2]);
            (walk, None)
        } else if c1 > c2 {
            walk.odd = !walk.odd;
            walk.push_node(node, kind, &[entry, n2, n1]);
            (walk, None)
        } else {
            let mut other = walk.clone();
            other.odd = !other.odd;
            other.push_node(node, kind, &[entry, n2, n1]);
            walk.push_node(node, kind, &[entry, n1, n2]);
            (walk, Some(other))
        }
    }

    /// Compares the newest code entry with the best code; false prunes.
    fn check_last(&self, walk: &mut Walk) -> bool {
        if walk.below || self.best.walk.is_none() {
            walk.below = true;
            return true;
        }
        let k = walk.code.len() - 1;
        match walk.code[k].cmp(&self.best.code[k]) {
            std::cmp::Ordering::Less => {
                walk.below = true;
                true
            }
            std::cmp::Ordering::Equal => true,
            std::cmp::Ordering::Greater => false,
        }
    }

    /// Re-examines a whole prefix, since the best may have changed.
    fn resume(&self, walk: &mut Walk) -> bool {
        if self.best.walk.is_none() {
            walk.below = true;
            return true;
        }
        match walk.code[..].cmp(&self.best.code[..walk.code.len()]) {
            std::cmp::Ordering::Less => {
                walk.below = true;
                true
            }
            std::cmp::Ordering::Equal => {
                walk.below = false;
                true
            }
            std::cmp::Ordering::Greater => false,
        }
    }

    fn run(&mut self, mut walk: Walk, mut pos: usize) {
        if !self.resume(&mut walk) {
            return;
        }
        let partner = &self.layout.d.partner;
        while pos < walk.order.len() {
            let p = partner[walk.order[pos] as usize];
            if p == OPEN {
                walk.code.push(OPEN);
            } else if walk.new_dart[p as usize] != UNSET {
                walk.code.push(walk.new_dart[p as usize]);
            } else {
                walk.code.push(walk.order.len() as u32);
                if !self.check_last(&mut walk) {
                    return;
                }
                let node = self.layout.node_of[p as usize];
                let (first, second) = self.place(walk, node, p);
                if let Some(w) = second {
                    self.run(w, pos + 1);
                }
                walk = first;
            }
            if !self.check_last(&mut walk) {
                return;
            }
            pos += 1;
        }
        self.finish(walk);
    }

    fn finish(&mut self, walk: Walk) {
        let best = &mut self.best;
        match best.walk.as_ref().map(|_| walk.code.cmp(&best.code)) {
            Some(std::cmp::Ordering::Greater) => {}
            Some(std::cmp::Ordering::Equal) => {
                if walk.odd {
                    best.odd = true;
                } else {
                    best.even = true;
                }
            }
            _ => {
                best.code = walk.code.clone();
                best.even = !walk.odd;
                best.odd = walk.odd;
                best.walk = Some(walk);
            }
        }
    }
}

struct ComponentForm {
    code: Vec<u32>,
    walk: Walk,
    sign: i8,
}

fn canonical_component(layout: &Layout, nodes: &[u32], skeleton: bool) -> ComponentForm {
    let mut search = Search {
        layout,
        best: Best {
            code: vec![],
            walk: None,
            even: false,
            odd: false,
        },
    };
    let total_nodes = layout.kind.len();
    let total_darts = layout.d.partner.len();
    if skeleton {
        let skel = &layout.skel_nodes;
        let e = skel.len();
        let first = |x: u32| layout.darts[x as usize][0];
        let min_color = skel.iter().map(|&x| layout.color[first(x) as usize]).min();
        if let Some(mc) = min_color {
            for r in 0..e {
                if layout.color[first(skel[r]) as usize] != mc {
                    continue;
                }
                let mut walk = Walk::new(total_nodes, total_darts);
                for i in 0..e {
                    let x = skel[(r + i) % e];
                    walk.push_node(x, Kind::Skel, &[first(x)]);
                }
                search.run(walk, 0);
            }
        } else {
            search.run(Walk::new(total_nodes, total_darts), 0);
        }
    } else {
        let darts: Vec<u32> = nodes
            .iter()
            .flat_map(|&x| layout.darts[x as usize][..layout.arity(x)].to_vec())
            .collect();
        let mc = darts.iter().map(|&h| layout.color[h as usize]).min().unwrap();
        for &s in darts.iter().filter(|&&h| layout.color[h as usize] == mc) {
            let node = layout.node_of[s as usize];
            let (a, b) = search.place(Walk::new(total_nodes, total_darts), node, s);
            if let Some(w) = b {
                search.run(w, 0);
            }
            search.run(a, 0);
        }
    }
    let best = search.best;
    let mut code = best.code;
    if skeleton {
        code.insert(0, layout.skel_nodes.len() as u32);
    }
    ComponentForm {
        code,
        walk: best.walk.unwrap(),
        sign: match (best.even, best.odd) {
            (true, true) => 0,
            (true, false) => 1,
            _ => -1,
        },
    }
}

/// Canonical representative and relative sign of `d`.
pub fn canonicalize(d: &Diagram) -> CanonicalForm {
    let layout = Layout::new(d);
    let (skel, closed) = layout.components();
    let mut forms: Vec<ComponentForm> = closed.iter().map(|c| canonical_component(&layout, c, false)).collect();
    forms.sort_by(|a, b| a.code.cmp(&b.code));
    if skel.is_some() {
        forms.insert(0, canonical_component(&layout, &[], true));
    }

    let n = d.partner.len();
    let mut global = vec![0u32; n];
    let mut offset = 0u32;
    for f in &forms {
        for (i, &h) in f.walk.order.iter().enumerate() {
            global[h as usize] = offset + i as u32;
        }
        offset += f.walk.order.len() as u32;
    }
    let mut out = Diagram {
        space: d.space,
        internal: vec![],
        legs: vec![],
        skeleton: vec![],
        partner: vec![OPEN; n],
        free_loops: d.free_loops,
    };
    let mut sign = 1i8;
    for f in &forms {
        sign *= f.sign;
        let mut cursor = 0;
        for &node in &f.walk.nodes {
            let g = global[f.walk.order[cursor] as usize];
            match layout.kind[node as usize] {
                Kind::Internal => out.internal.push([g, g + 1, g + 2]),
                Kind::Leg => out.legs.push(g),
                Kind::Skel => out.skeleton.push(g),
            }
            cursor += layout.arity(node);
        }
    }
    for (h, &p) in d.partner.iter().enumerate() {
        if p != OPEN {
            out.partner[global[h] as usize] = global[p as usize];
        }
    }
    CanonicalForm { diagram: out, sign }
}

/// Relative sign `s` with `d1 = s * d2` when the diagrams are isomorphic.
pub fn is_isomorphic(d1: &Diagram, d2: &Diagram) -> Result<Option<i8>> {
    if d1.space != d2.space || d1.grading() != d2.grading() {
        return Err(Error::Grading(format!(
            "{}{:?} vs {}{:?}",
            d1.space,
            d1.grading(),
            d2.space,
            d2.grading()
        )));
    }
    let (c1, c2) = (canonicalize(d1), canonicalize(d2));
    Ok((c1.diagram == c2.diagram).then_some(c1.sign * c2.sign))
}
