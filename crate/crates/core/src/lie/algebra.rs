use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

pub type Matrix = Vec<Vec<Rational>>;

/// A module over the Lie algebra: one square matrix per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub dim: usize,
    pub action: Vec<Matrix>,
}

/// `[e_i, e_j] = Σ_k c[k][i][j] e_k` together with an invariant form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricLieAlgebra {
    pub dim: usize,
    pub structure_constants: Vec<Vec<Vec<Rational>>>,
    pub metric: Matrix,
    pub representations: BTreeMap<String, Representation>,
}

/// The first identity found to fail, with the indices where it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: &'static str,
    pub indices: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at indices {:?}", self.identity, self.indices)
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Lie(v.to_string())
    }
}

fn fail(identity: &'static str, indices: &[usize]) -> std::result::Result<(), Violation> {
    Err(Violation {
        identity,
        indices: indices.to_vec(),
    })
}

fn zeros(n: usize, m: usize) -> Matrix {
    vec![vec![Rational::zero(); m]; n]
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

/// Inverse over the rationals, or `None` when singular.
pub(crate) fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m.clone();
    let mut inv = zeros(n, n);
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let s = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &s;
            inv[col][j] *= &s;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

impl MetricLieAlgebra {
    /// `b([e_i, e_j], e_k)`.
    pub fn bracket_form(&self, i: usize, j: usize, k: usize) -> Rational {
        (0..self.dim)
            .map(|m| &self.structure_constants[m][i][j] * &self.metric[m][k])
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn representation(&self, name: &str) -> Result<&Representation> {
        self.representations
            .get(name)
            .ok_or_else(|| Error::Lie(format!("no representation named '{name}'")))
    }

    /// Checks antisymmetry, Jacobi, and that the metric is symmetric,
    /// nondegenerate and invariant.
    pub fn check(&self) -> std::result::Result<(), Violation> {
        let n = self.dim;
        if n == 0 {
            return fail("positive dimension", &[]);
        }
        let c = &self.structure_constants;
        if c.len() != n || c.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return fail("structure constant shape", &[n]);
        }
        if self.metric.len() != n || self.metric.iter().any(|r| r.len() != n) {
            return fail("metric shape", &[n]);
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if c[k][i][j] != -&c[k][j][i] {
                        return fail("antisymmetry", &[k, i, j]);
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Rational::zero();
                        for m in 0..n {
                            s += &c[m][i][j] * &c[l][m][k];
                            s += &c[m][j][k] * &c[l][m][i];
                            s += &c[m][k][i] * &c[l][m][j];
                        }
                        if !s.is_zero() {
                            return fail("Jacobi identity", &[i, j, k, l]);
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.metric[i][j] != self.metric[j][i] {
                    return fail("metric symmetry", &[i, j]);
                }
            }
        }
        if invert(&self.metric).is_none() {
            return fail("metric nondegeneracy", &[]);
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut s = Rational::zero();
                    for m in 0..n {
                        s += &c[m][x][y] * &self.metric[m][z];
                        s += &c[m][x][z] * &self.metric[y][m];
                    }
                    if !s.is_zero() {
                        return fail("metric invariance", &[x, y, z]);
                    }
                }
            }
        }
        for rep in self.representations.values() {
            self.check_representation(rep)?;
        }
        Ok(())
    }

    /// Checks `ρ([e_i, e_j]) = [ρ(e_i), ρ(e_j)]`.
    pub fn check_representation(&self, rep: &Representation) -> std::result::Result<(), Violation> {
        let n = self.dim;
        let d = rep.dim;
        if d == 0 || rep.action.len() != n || rep.action.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
            return fail("representation shape", &[d]);
        }
        for i in 0..n {
            for j in 0..n {
                let ab = mat_mul(&rep.action[i], &rep.action[j]);
                let ba = mat_mul(&rep.action[j], &rep.action[i]);
                for r in 0..d {
                    for s in 0..d {
                        let lhs: Rational = (0..n)
                            .map(|k| &self.structure_constants[k][i][j] * &rep.action[k][r][s])
                            .fold(Rational::zero(), |a, b| a + b);
                        if lhs != &ab[r][s] - &ba[r][s] {
                            return fail("representation bracket", &[i, j, r, s]);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The adjoint module, `ρ(e_i)[k][j] = c[k][i][j]`.
    pub fn adjoint(&self) -> Representation {
        let n = self.dim;
        let action = (0..n)
            .map(|i| (0..n).map(|k| (0..n).map(|j| self.structure_constants[k][i][j].clone()).collect()).collect())
            .collect();
        Representation { dim: n, action }
    }
}

/// Free-standing form of [`MetricLieAlgebra::check`].
pub fn check_lie(g: &MetricLieAlgebra) -> std::result::Result<(), Violation> {
    g.check()
}

/// `sl2` on the basis `(h, e, f)` with the trace form of the defining
/// representation; carries the `fundamental` and `adjoint` modules.
pub fn sl2() -> MetricLieAlgebra {
    let mut c = vec![vec![vec![Rational::zero(); 3]; 3]; 3];
    let (h, e, f) = (0, 1, 2);
    c[e][h][e] = int(2);
    c[e][e][h] = int(-2);
    c[f][h][f] = int(-2);
    c[f][f][h] = int(2);
    c[h][e][f] = int(1);
    c[h][f][e] = int(-1);
    let mut metric = zeros(3, 3);
    metric[h][h] = int(2);
    metric[e][f] = int(1);
    metric[f][e] = int(1);
    let m = |a: [[i64; 2]; 2]| -> Matrix { a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect() };
    let fundamental = Representation {
        dim: 2,
        action: vec![m([[1, 0], [0, -1]]), m([[0, 1], [0, 0]]), m([[0, 0], [1, 0]])],
    };
    let mut g = MetricLieAlgebra {
        dim: 3,
        structure_constants: c,
        metric,
        representations: BTreeMap::new(),
    };
    let adjoint = g.adjoint();
    g.representations.insert("fundamental".into(), fundamental);
    g.representations.insert("adjoint".into(), adjoint);
    g
}

/// The abelian algebra of dimension `d` with the identity metric and the
/// one-dimensional `trivial` module.
pub fn abelian(d: usize) -> MetricLieAlgebra {
    let mut metric = zeros(d, d);
    for (i, row) in metric.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    let mut representations = BTreeMap::new();
    representations.insert(
        "trivial".into(),
        Representation {
            dim: 1,
            action: vec![zeros(1, 1); d],
        },
    );
    MetricLieAlgebra {
        dim: d,
        structure_constants: vec![zeros(d, d); d],
        metric,
        representations,
    }
}

/// `sl2`, or `abelian:N`.
pub fn builtin(name: &str) -> Option<MetricLieAlgebra> {
    match name {
        "sl2" => Some(sl2()),
        _ => name
            .strip_prefix("abelian:")
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n > 0)
            .map(abelian),
    }
}

fn scalar(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse(s),
        Value::Number(n) if n.is_i64() => Ok(int(n.as_i64().unwrap())),
        _ => Err(Error::Format(format!("expected an exact rational string, found {v}"))),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Format(format!("{what} must be an array")))
}

fn matrix(v: &Value, what: &str) -> Result<Matrix> {
    array(v, what)?
        .iter()
        .map(|r| array(r, what)?.iter().map(scalar).collect())
        .collect()
}

fn size(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::Format(format!("{what} must be a non-negative integer")))
}

impl MetricLieAlgebra {
    /// Reads `{"dim", "structure_constants": c[k][i][j], "metric", "representations"}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Format("Lie algebra must be an object".into()))?;
        for k in obj.keys() {
            if !["dim", "structure_constants", "metric", "representations"].contains(&k.as_str()) {
                return Err(Error::Format(format!("unknown field '{k}'")));
            }
        }
        let get = |k: &str| obj.get(k).ok_or_else(|| Error::Format(format!("missing field '{k}'")));
        let dim = size(get("dim")?, "dim")?;
        let structure_constants = array(get("structure_constants")?, "structure_constants")?
            .iter()
            .map(|m| matrix(m, "structure_constants"))
            .collect::<Result<_>>()?;
        let metric = matrix(get("metric")?, "metric")?;
        let mut representations = BTreeMap::new();
        if let Some(reps) = obj.get("representations") {
            let reps = reps.as_object().ok_or_else(|| Error::Format("representations must be an object".into()))?;
            for (name, r) in reps {
                let dim = size(r.get("dim").ok_or_else(|| Error::Format("representation needs dim".into()))?, "dim")?;
                let action = array(r.get("action").ok_or_else(|| Error::Format("representation needs action".into()))?, "action")?
                    .iter()
                    .map(|m| matrix(m, "action"))
                    .collect::<Result<_>>()?;
                representations.insert(name.clone(), Representation { dim, action });
            }
        }
        Ok(MetricLieAlgebra {
            dim,
            structure_constants,
            metric,
            representations,
        })
    }
}

/// `f_{ijk} = b([e_i, e_j], e_k)` and the inverse metric `b^{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTensors {
    pub dim: usize,
    f: Vec<Rational>,
    pub c_up: Matrix,
}

impl StructureTensors {
    pub fn f(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.f[(i * self.dim + j) * self.dim + k]
    }
}

pub fn derive_tensors(g: &MetricLieAlgebra) -> Result<StructureTensors> {
    let n = g.dim;
    let c_up = invert(&g.metric).ok_or_else(|| Error::Lie("metric is singular".into()))?;
    let mut f = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                f.push(g.bracket_form(i, j, k));
            }
        }
    }
    Ok(StructureTensors { dim: n, f, c_up })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn builtins_pass() {
        assert_eq!(sl2().check(), Ok(()));
        assert_eq!(abelian(4).check(), Ok(()));
        assert_eq!(builtin("abelian:2"), Some(abelian(2)));
        assert!(builtin("abelian:0").is_none() && builtin("so3").is_none());
    }

    #[test]
    fn perturbed_constant_breaks_jacobi() {
        let mut g = sl2();
        g.representations.clear();
        g.structure_constants[1][0][1] = int(3);
        g.structure_constants[1][1][0] = int(-3);
        assert_eq!(g.check().unwrap_err().identity, "Jacobi identity");
        let mut g = sl2();
        g.structure_constants[0][1][2] = int(2);
        assert_eq!(g.check().unwrap_err().identity, "antisymmetry");
    }

    #[test]
    fn bad_metric_and_module() {
        let mut g = sl2();
        g.metric[0][0] = int(0);
        g.metric[1][2] = int(0);
        g.metric[2][1] = int(0);
        assert_eq!(g.check().unwrap_err().identity, "metric nondegeneracy");
        let mut g = sl2();
        g.metric[0][0] = int(3);
        assert_eq!(g.check().unwrap_err().identity, "metric invariance");
        let mut g = sl2();
        g.representations.get_mut("fundamental").unwrap().action[1][0][1] = int(2);
        assert_eq!(g.check().unwrap_err().identity, "representation bracket");
    }

    #[test]
    fn sl2_tensors() {
        let t = derive_tensors(&sl2()).unwrap();
        assert_eq!(t.c_up[0][0], rat(1, 2));
        assert_eq!(t.c_up[1][2], int(1));
        assert_eq!(t.c_up[2][1], int(1));
        assert_eq!(t.c_up[1][1], int(0));
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let x = t.f(i, j, k);
                    assert_eq!(*x, -t.f(j, i, k));
                    assert_eq!(*x, -t.f(i, k, j));
                    assert_eq!(x, t.f(j, k, i));
                }
            }
        }
        let a = derive_tensors(&abelian(3)).unwrap();
        assert!(a.f.iter().all(Zero::is_zero));
        assert_eq!(a.c_up, abelian(3).metric);
    }

    #[test]
    fn json_loader() {
        let text = r#"{"dim":1,"structure_constants":[[["0"]]],"metric":[["2"]],
            "representations":{"scalar":{"dim":1,"action":[[["0"]]]}}}"#;
        let g = MetricLieAlgebra::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(g.check(), Ok(()));
        assert_eq!(g.metric[0][0], int(2));
        let bad = r#"{"dim":1,"structure_constants":[[[0.5]]],"metric":[["1"]]}"#;
        assert!(MetricLieAlgebra::from_json(&serde_json::from_str(bad).unwrap()).is_err());
    }
}
