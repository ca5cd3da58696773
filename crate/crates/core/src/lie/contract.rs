//! Tensor networks for diagram evaluation: layout, elimination order
//! planning and exact execution.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::diagram::Diagram;
use crate::error::{Error, Result};

/// Limits for planning and running a contraction.
#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Plans whose cost exceeds this are refused.
    pub max_cost: u128,
    /// Orders are searched exhaustively up to this many variables.
    pub dp_width: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_cost: 500_000_000,
            dp_width: 10,
        }
    }
}

/// An elimination order. `cost` sums the sizes of the joint tensors formed
/// at each step; `naive_cost` is the size of the full index expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionPlan {
    pub order: Vec<usize>,
    pub cost: u128,
    pub naive_cost: u128,
    pub exhaustive: bool,
}

type Mask = u128;
const MAX_VARS: usize = Mask::BITS as usize;

/// Which stored tensor a slot reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Kind {
    /// Structure tensor with the raised slots in the mask.
    Vertex(u8),
    /// Action tensor, index raised or not.
    Point(bool),
}

#[derive(Clone, Debug)]
pub(crate) struct Slot {
    pub kind: Kind,
    /// Variables in tensor order; repeats mean a diagonal.
    pub vars: Vec<usize>,
}

/// Variables and tensor slots of a diagram. Each edge is one Lie index
/// variable, lowered at its smaller half-edge and raised at the larger; each
/// gap between consecutive circle points is one module index.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub dims: Vec<usize>,
    pub slots: Vec<Slot>,
}

impl Layout {
    pub fn new(d: &Diagram, dim_g: usize, dim_v: usize) -> Self {
        let n = d.half_edge_count();
        let mut var = vec![0usize; n];
        let mut raised = vec![false; n];
        let edges = d.edges();
        for (k, &(a, b)) in edges.iter().enumerate() {
            var[a as usize] = k;
            var[b as usize] = k;
            raised[b as usize] = true;
        }
        let mut dims = vec![dim_g; edges.len()];
        let mut slots = Vec::new();
        for t in d.internal() {
            let mask = t.iter().enumerate().fold(0u8, |m, (i, &h)| m | ((raised[h as usize] as u8) << i));
            slots.push(Slot {
                kind: Kind::Vertex(mask),
                vars: t.iter().map(|&h| var[h as usize]).collect(),
            });
        }
        let skel = d.skeleton().unwrap_or(&[]);
        let gap0 = dims.len();
        dims.extend(std::iter::repeat_n(dim_v, skel.len()));
        for (p, &h) in skel.iter().enumerate() {
            slots.push(Slot {
                kind: Kind::Point(raised[h as usize]),
                vars: vec![var[h as usize], gap0 + p, gap0 + (p + 1) % skel.len()],
            });
        }
        Layout { dims, slots }
    }

    fn factor_masks(&self) -> Vec<Mask> {
        self.slots.iter().map(|s| s.vars.iter().fold(0, |m, &v| m | (1 << v))).collect()
    }

    pub fn plan(&self, opts: &EvalOptions) -> Result<ContractionPlan> {
        if self.dims.len() > MAX_VARS {
            return Err(Error::Resource(format!("{} index variables exceed the planner limit of {MAX_VARS}", self.dims.len())));
        }
        let masks = self.factor_masks();
        let naive_cost = self.dims.iter().fold(1u128, |a, &d| a.saturating_mul(d as u128));
        let (order, cost, exhaustive) = if self.dims.len() <= opts.dp_width {
            let (o, c) = exhaustive_order(&self.dims, &masks);
            (o, c, true)
        } else {
            let (o, c) = greedy_order(&self.dims, &masks);
            (o, c, false)
        };
        Ok(ContractionPlan {
            order,
            cost,
            naive_cost,
            exhaustive,
        })
    }
}

fn size(dims: &[usize], m: Mask) -> u128 {
    let mut s = 1u128;
    let mut m = m;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        s = s.saturating_mul(dims[v] as u128);
        m &= m - 1;
    }
    s
}

/// Eliminates `x`: merges every factor containing it. Returns the joint mask.
fn step(factors: &mut Vec<Mask>, x: usize) -> Mask {
    let bit = 1 << x;
    let mut joint = 0;
    factors.retain(|&f| {
        if f & bit != 0 {
            joint |= f;
            false
        } else {
            true
        }
    });
    factors.push(joint & !bit);
    joint
}

fn greedy_order(dims: &[usize], masks: &[Mask]) -> (Vec<usize>, u128) {
    let mut factors = masks.to_vec();
    let mut order = Vec::new();
    let mut cost = 0u128;
    let mut left: Vec<usize> = (0..dims.len()).collect();
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let joint = factors.iter().filter(|&&f| f & (1 << x) != 0).fold(0, |a, f| a | f);
                (i, size(dims, joint))
            })
            .min_by_key(|&(i, s)| (s, left[i]))
            .unwrap();
        let x = left.remove(pos);
        cost = cost.saturating_add(size(dims, step(&mut factors, x)));
        order.push(x);
    }
    (order, cost)
}

/// Variables of the joint tensor formed when `x` is eliminated after the
/// set `s`: everything reachable from `x` through eliminated variables.
fn joint_after(nbr: &[Mask], s: Mask, x: usize) -> Mask {
    let inner = s | (1 << x);
    let mut reach: Mask = 1 << x;
    let mut done: Mask = 0;
    loop {
        let mut todo = reach & inner & !done;
        if todo == 0 {
            return reach & !s;
        }
        done |= todo;
        while todo != 0 {
            let v = todo.trailing_zeros() as usize;
            reach |= nbr[v];
            todo &= todo - 1;
        }
    }
}

fn exhaustive_order(dims: &[usize], masks: &[Mask]) -> (Vec<usize>, u128) {
    let n = dims.len();
    let nbr: Vec<Mask> = (0..n)
        .map(|v| masks.iter().filter(|&&f| f & (1 << v) != 0).fold(1 << v, |a, f| a | f))
        .collect();
    let full: usize = (1 << n) - 1;
    let mut best = vec![u128::MAX; 1 << n];
    let mut choice = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for s in 0..full {
        if best[s] == u128::MAX {
            continue;
        }
        for x in 0..n {
            if s & (1 << x) != 0 {
                continue;
            }
            let c = best[s].saturating_add(size(dims, joint_after(&nbr, s as Mask, x)));
            let t = s | (1 << x);
            if c < best[t] {
                best[t] = c;
                choice[t] = x;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let x = choice[s];
        order.push(x);
        s &= !(1 << x);
    }
    order.reverse();
    (order, best[full])
}

/// Exact ring arithmetic that may refuse on overflow.
pub(crate) trait Num: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
}

impl Num for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
}

impl Num for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
}

/// A dense tensor over distinct sorted variables, row-major.
#[derive(Clone, Debug)]
pub(crate) struct Factor<T> {
    pub vars: Vec<usize>,
    pub data: Vec<T>,
}

/// Dense integer tensor in slot order.
#[derive(Clone, Debug)]
pub(crate) struct IntTensor {
    pub shape: Vec<usize>,
    pub data: Vec<BigInt>,
}

impl IntTensor {
    fn get(&self, idx: &[usize]) -> &BigInt {
        let mut off = 0;
        for (i, &x) in idx.iter().enumerate() {
            off = off * self.shape[i] + x;
        }
        &self.data[off]
    }

    pub fn to_i128(&self) -> Option<Vec<i128>> {
        self.data.iter().map(ToPrimitive::to_i128).collect()
    }
}

/// Reads a slot's tensor into a factor over its distinct variables.
pub(crate) fn slot_factor<T: Clone>(slot: &Slot, dims: &[usize], tensor: &IntTensor, convert: impl Fn(&BigInt) -> T) -> Factor<T> {
    let mut vars = slot.vars.clone();
    vars.sort_unstable();
    vars.dedup();
    let total: usize = vars.iter().map(|&v| dims[v]).product();
    let mut data = Vec::with_capacity(total);
    let mut assign = vec![0usize; vars.len()];
    let mut idx = vec![0usize; slot.vars.len()];
    for _ in 0..total {
        for (k, v) in slot.vars.iter().enumerate() {
            idx[k] = assign[vars.binary_search(v).unwrap()];
        }
        data.push(convert(tensor.get(&idx)));
        for p in (0..vars.len()).rev() {
            assign[p] += 1;
            if assign[p] < dims[vars[p]] {
                break;
            }
            assign[p] = 0;
        }
    }
    Factor { vars, data }
}

fn strides(vars: &[usize], dims: &[usize]) -> Vec<usize> {
    let mut s = vec![0; vars.len()];
    let mut acc = 1;
    for i in (0..vars.len()).rev() {
        s[i] = acc;
        acc *= dims[vars[i]];
    }
    s
}

fn eliminate<T: Num>(factors: &mut Vec<Factor<T>>, x: usize, dims: &[usize]) -> Option<()> {
    let (touched, rest): (Vec<_>, Vec<_>) = std::mem::take(factors).into_iter().partition(|f| f.vars.contains(&x));
    *factors = rest;
    let mut out_vars: Vec<usize> = touched.iter().flat_map(|f| f.vars.iter().copied()).filter(|&v| v != x).collect();
    out_vars.sort_unstable();
    out_vars.dedup();
    // joint variables: outputs then x, so x runs fastest
    let mut joint = out_vars.clone();
    joint.push(x);
    let step: Vec<Vec<usize>> = touched
        .iter()
        .map(|f| {
            let st = strides(&f.vars, dims);
            joint
                .iter()
                .map(|v| f.vars.iter().position(|u| u == v).map_or(0, |i| st[i]))
                .collect()
        })
        .collect();
    let out_len: usize = out_vars.iter().map(|&v| dims[v]).product();
    let dx = dims[x];
    let mut data = Vec::with_capacity(out_len);
    let mut assign = vec![0usize; out_vars.len()];
    let mut base = vec![0usize; touched.len()];
    for _ in 0..out_len {
        let mut acc = T::zero();
        'inner: for a in 0..dx {
            let mut prod: Option<T> = None;
            for (k, f) in touched.iter().enumerate() {
                let e = &f.data[base[k] + a * step[k][out_vars.len()]];
                if e.is_zero() {
                    continue 'inner;
                }
                prod = Some(match prod {
                    None => e.clone(),
                    Some(p) => p.mul(e)?,
                });
            }
            if let Some(p) = prod {
                acc = acc.add(&p)?;
            }
        }
        data.push(acc);
        for p in (0..out_vars.len()).rev() {
            assign[p] += 1;
            for (k, b) in base.iter_mut().enumerate() {
                *b += step[k][p];
            }
            if assign[p] < dims[out_vars[p]] {
                break;
            }
            for (k, b) in base.iter_mut().enumerate() {
                *b -= step[k][p] * assign[p];
            }
            assign[p] = 0;
        }
    }
    factors.push(Factor { vars: out_vars, data });
    Some(())
}

/// Runs a plan; `None` on arithmetic overflow.
pub(crate) fn execute<T: Num>(mut factors: Vec<Factor<T>>, dims: &[usize], order: &[usize], one: T) -> Option<T> {
    for &x in order {
        eliminate(&mut factors, x, dims)?;
    }
    let mut acc = one;
    for f in &factors {
        acc = acc.mul(&f.data[0])?;
    }
    Some(acc)
}
