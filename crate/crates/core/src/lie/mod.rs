//! Metric Lie algebras and the weight systems they define on diagrams.

mod algebra;
mod contract;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::DiagramVector;
use crate::diagram::{Diagram, Space};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub use algebra::{abelian, builtin, check_lie, derive_tensors, sl2, Matrix, MetricLieAlgebra, Representation, StructureTensors, Violation};
pub use contract::{ContractionPlan, EvalOptions};
use contract::{execute, slot_factor, Factor, IntTensor, Kind, Layout};

/// A rational tensor stored as integers over a common denominator.
#[derive(Clone, Debug)]
struct Scaled {
    tensor: IntTensor,
    denom: BigInt,
}

fn scale(shape: Vec<usize>, data: Vec<Rational>) -> Scaled {
    let denom = data.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let data = data
        .iter()
        .map(|x| x.numer() * (&denom / x.denom()))
        .collect();
    Scaled {
        tensor: IntTensor { shape, data },
        denom,
    }
}

/// Contracts slot `s` of a rank-3 tensor with the inverse metric.
fn raise(t: &[Rational], shape: [usize; 3], slot: usize, c_up: &Matrix) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); t.len()];
    let at = |i: [usize; 3]| (i[0] * shape[1] + i[1]) * shape[2] + i[2];
    for a in 0..shape[0] {
        for b in 0..shape[1] {
            for c in 0..shape[2] {
                let idx = [a, b, c];
                let mut acc = Rational::zero();
                for m in 0..shape[slot] {
                    let mut j = idx;
                    j[slot] = m;
                    let coeff = &c_up[idx[slot]][m];
                    if !coeff.is_zero() {
                        acc += coeff * &t[at(j)];
                    }
                }
                out[at(idx)] = acc;
            }
        }
    }
    out
}

/// The scalar weight system of a metric Lie algebra and, for `A`, a module.
#[derive(Clone, Debug)]
pub struct WeightSystem {
    dim_g: usize,
    dim_v: Option<usize>,
    vertex: Vec<Scaled>,
    point: Vec<Scaled>,
    options: EvalOptions,
}

impl WeightSystem {
    /// Validates `g` (and the named module) and prepares the tensors.
    pub fn new(g: &MetricLieAlgebra, rep: Option<&str>) -> Result<Self> {
        g.check()?;
        let rep = rep.map(|name| g.representation(name)).transpose()?;
        let tensors = derive_tensors(g)?;
        let n = g.dim;
        let shape = [n, n, n];
        let mut f = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    f.push(tensors.f(i, j, k).clone());
                }
            }
        }
        let vertex = (0u8..8)
            .map(|mask| {
                let mut t = f.clone();
                for s in 0..3 {
                    if mask & (1 << s) != 0 {
                        t = raise(&t, shape, s, &tensors.c_up);
                    }
                }
                scale(shape.to_vec(), t)
            })
            .collect();
        let point = match rep {
            None => vec![],
            Some(r) => {
                let d = r.dim;
                let low: Vec<Rational> = r.action.iter().flat_map(|m| m.iter().flat_map(|row| row.iter().cloned())).collect();
                let high = raise(&low, [n, d, d], 0, &tensors.c_up);
                vec![scale(vec![n, d, d], low), scale(vec![n, d, d], high)]
            }
        };
        Ok(WeightSystem {
            dim_g: n,
            dim_v: rep.map(|r| r.dim),
            vertex,
            point,
            options: EvalOptions::default(),
        })
    }

    pub fn with_options(mut self, options: EvalOptions) -> Self {
        self.options = options;
        self
    }

    pub fn options(&self) -> &EvalOptions {
        &self.options
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_v(&self) -> Option<usize> {
        self.dim_v
    }

    fn layout(&self, d: &Diagram) -> Result<Layout> {
        match d.space() {
            Space::A if self.dim_v.is_none() => Err(Error::Lie("diagrams on a circle need a representation".into())),
            Space::B if !d.legs().is_empty() => Err(Error::Grading("only diagrams without legs can be evaluated".into())),
            _ => Ok(Layout::new(d, self.dim_g, self.dim_v.unwrap_or(1))),
        }
    }

    /// The elimination order used for `d`.
    pub fn plan(&self, d: &Diagram) -> Result<ContractionPlan> {
        self.layout(d)?.plan(&self.options)
    }

    fn tensor(&self, k: Kind) -> &Scaled {
        match k {
            Kind::Vertex(m) => &self.vertex[m as usize],
            Kind::Point(r) => &self.point[r as usize],
        }
    }

    /// Full contraction: structure tensors at trivalent vertices, the module
    /// action around the circle with a trace, the inverse metric on edges.
    pub fn evaluate(&self, d: &Diagram) -> Result<Rational> {
        let layout = self.layout(d)?;
        let plan = layout.plan(&self.options)?;
        if plan.cost > self.options.max_cost {
            return Err(Error::Resource(format!(
                "contraction cost {} exceeds the limit {}",
                plan.cost, self.options.max_cost
            )));
        }
        let mut denom = BigInt::one();
        for s in &layout.slots {
            denom *= &self.tensor(s.kind).denom;
        }
        let fast: Option<Vec<Factor<i128>>> = layout
            .slots
            .iter()
            .map(|s| {
                let t = &self.tensor(s.kind).tensor;
                t.to_i128()?;
                Some(slot_factor(s, &layout.dims, t, |x| i128::try_from(x).unwrap()))
            })
            .collect();
        let numer = fast
            .and_then(|f| execute(f, &layout.dims, &plan.order, 1i128))
            .map(BigInt::from)
            .unwrap_or_else(|| {
                let f = layout.slots.iter().map(|s| slot_factor(s, &layout.dims, &self.tensor(s.kind).tensor, Clone::clone)).collect();
                execute(f, &layout.dims, &plan.order, BigInt::one()).expect("big integers do not overflow")
            });
        let mut value = Rational::new(numer, denom);
        value *= Rational::from_integer(BigInt::from(self.dim_g).pow(d.free_loops()));
        if d.space() == Space::A && d.grading().e == 0 {
            value *= Rational::from_integer(BigInt::from(self.dim_v.unwrap_or(1)));
        }
        Ok(value)
    }

    /// Evaluation of a diagram with neither legs nor circle.
    pub fn evaluate_closed(&self, d: &Diagram) -> Result<Rational> {
        if d.space() != Space::B || !d.legs().is_empty() {
            return Err(Error::Grading("closed evaluation needs a diagram without legs or circle".into()));
        }
        self.evaluate(d)
    }

    pub fn evaluate_vector(&self, x: &DiagramVector) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (d, c) in x.terms() {
            acc += c * self.evaluate(d)?;
        }
        Ok(acc)
    }
}

/// Plans the contraction of `d` for the given dimensions.
pub fn contraction_plan(d: &Diagram, dim_g: usize, dim_v: usize, opts: &EvalOptions) -> Result<ContractionPlan> {
    Layout::new(d, dim_g, dim_v).plan(opts)
}
