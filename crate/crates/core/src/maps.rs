//! Products and structural maps between `A` and `B`: disjoint union,
//! connected sum, the symmetrization map, closure, cap products and the
//! wheels element.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::algebra::{BasisStore, DiagramVector};
use crate::diagram::{Diagram, Sketch, Space};
use crate::error::{DiagramError, Error, Result};
use crate::rational::{factorial, Rational};
use crate::series::wheel_coefficients;

fn require(v: &DiagramVector, space: Space) -> Result<()> {
    if v.space() != space {
        return Err(DiagramError::SpaceMismatch {
            expected: space,
            found: v.space(),
        }
        .into());
    }
    Ok(())
}

fn frac(n: BigInt) -> Rational {
    Rational::new(BigInt::one(), n)
}

/// Copies `b` into `sk` with labels shifted past everything already there.
/// Returns the shift.
fn absorb(sk: &mut Sketch, b: &Diagram) -> u32 {
    let s = sk.next_label();
    sk.internal.extend(b.internal().iter().map(|t| [t[0] + s, t[1] + s, t[2] + s]));
    sk.legs.extend(b.legs().iter().map(|h| h + s));
    for (x, y) in b.edges() {
        sk.pair(x + s, y + s);
    }
    sk.free_loops += b.free_loops();
    s
}

/// Disjoint union; `b` must not carry a skeleton, the result lives in `a`'s space.
pub fn union_diagrams(a: &Diagram, b: &Diagram) -> Diagram {
    assert!(b.skeleton().is_none(), "only skeleton-free diagrams can be adjoined");
    let mut sk = a.to_sketch();
    absorb(&mut sk, b);
    sk.build()
}

fn bilinear(a: &DiagramVector, b: &DiagramVector, space: Space, mut f: impl FnMut(&Diagram, &Diagram) -> Result<DiagramVector>) -> Result<DiagramVector> {
    let mut out = DiagramVector::zero(space);
    for (x, cx) in a.terms() {
        for (y, cy) in b.terms() {
            let c = cx * cy;
            for (d, cd) in f(x, y)?.terms() {
                out.add_term(d, cd * &c);
            }
        }
    }
    Ok(out)
}

/// The product of `B`.
pub fn disjoint_union(a: &DiagramVector, b: &DiagramVector) -> Result<DiagramVector> {
    require(a, Space::B)?;
    require(b, Space::B)?;
    bilinear(a, b, Space::B, |x, y| Ok(DiagramVector::from_diagram(&union_diagrams(x, y))))
}

/// Inserts the circle of `b` into that of `a` just before skeleton position
/// `pos` of `a` (taken cyclically).
pub fn connect_sum_at(a: &Diagram, b: &Diagram, pos: usize) -> Result<Diagram> {
    let (Some(sa), Some(sb)) = (a.skeleton(), b.skeleton()) else {
        return Err(DiagramError::MixedSpace("connected sum needs two diagrams in A").into());
    };
    let pos = if sa.is_empty() { 0 } else { pos % sa.len() };
    let mut sk = a.to_sketch();
    let shift = absorb(&mut sk, b);
    sk.skeleton.splice(pos..pos, sb.iter().map(|h| h + shift));
    Ok(sk.build())
}

/// The product of `A`: `b` is inserted after the last skeleton point of `a`.
pub fn connect_sum(a: &DiagramVector, b: &DiagramVector) -> Result<DiagramVector> {
    require(a, Space::A)?;
    require(b, Space::A)?;
    bilinear(a, b, Space::A, |x, y| {
        let e = x.grading().e;
        Ok(DiagramVector::from_diagram(&connect_sum_at(x, y, e)?))
    })
}

fn permutations(items: &[u32], f: &mut impl FnMut(&[u32])) {
    fn go(prefix: &mut Vec<u32>, rest: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if rest.is_empty() {
            f(prefix);
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            go(prefix, rest, f);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    go(&mut Vec::new(), &mut items.to_vec(), f);
}

fn chi_diagram(d: &Diagram) -> DiagramVector {
    let legs = d.legs();
    let mut out = DiagramVector::zero(Space::A);
    let base = d.to_sketch();
    let mut attach = |order: &[u32]| {
        let mut sk = base.clone();
        sk.space = Space::A;
        sk.legs.clear();
        sk.skeleton = order.to_vec();
        out.add_term(&sk.build(), Rational::one());
    };
    // orders differing by a rotation of the circle coincide, so fix the first leg
    match legs.split_first() {
        None => attach(&[]),
        Some((&first, rest)) => permutations(rest, &mut |p| {
            let mut order = vec![first];
            order.extend_from_slice(p);
            attach(&order);
        }),
    }
    let count = factorial(legs.len().saturating_sub(1));
    out.scaled(&frac(count))
}

/// Attaches legs to a circle in every order and averages.
pub fn chi(x: &DiagramVector) -> Result<DiagramVector> {
    require(x, Space::B)?;
    x.map_linear(Space::A, |d| Ok(chi_diagram(d)))
}

fn perfect_matchings(items: &[u32], f: &mut impl FnMut(&[(u32, u32)])) {
    fn go(rest: &[u32], acc: &mut Vec<(u32, u32)>, f: &mut impl FnMut(&[(u32, u32)])) {
        let Some((&a, tail)) = rest.split_first() else {
            f(acc);
            return;
        };
        for i in 0..tail.len() {
            let mut remaining = tail.to_vec();
            let b = remaining.remove(i);
            acc.push((a, b));
            go(&remaining, acc, f);
            acc.pop();
        }
    }
    go(items, &mut Vec::new(), f);
}

fn closure_diagram(d: &Diagram) -> DiagramVector {
    let mut out = DiagramVector::zero(Space::B);
    if d.legs().len() % 2 == 1 {
        return out;
    }
    let base = d.to_sketch();
    perfect_matchings(d.legs(), &mut |m| {
        let mut sk = base.clone();
        for &(a, b) in m {
            sk.glue_legs(a, b);
        }
        out.add_term(&sk.build(), Rational::one());
    });
    out
}

/// Sum over all ways of pairing up the legs.
pub fn closure(x: &DiagramVector) -> Result<DiagramVector> {
    require(x, Space::B)?;
    x.map_linear(Space::B, |d| Ok(closure_diagram(d)))
}

fn injections(k: usize, targets: &[u32], f: &mut impl FnMut(&[u32])) {
    fn go(k: usize, rest: &mut Vec<u32>, acc: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            acc.push(x);
            go(k, rest, acc, f);
            acc.pop();
            rest.insert(i, x);
        }
    }
    if k <= targets.len() {
        go(k, &mut targets.to_vec(), &mut Vec::new(), f);
    }
}

fn cap_diagram(c: &Diagram, d: &Diagram) -> DiagramVector {
    let mut out = DiagramVector::zero(Space::B);
    let mut base = d.to_sketch();
    let shift = absorb(&mut base, c);
    let c_legs: Vec<u32> = c.legs().iter().map(|h| h + shift).collect();
    injections(c_legs.len(), d.legs(), &mut |targets| {
        let mut sk = base.clone();
        for (&a, &b) in c_legs.iter().zip(targets) {
            sk.glue_legs(a, b);
        }
        out.add_term(&sk.build(), Rational::one());
    });
    out
}

/// `c ∩ x`: glue every leg of `c` to a distinct leg of `x`, in all ways.
pub fn cap(c: &DiagramVector, x: &DiagramVector) -> Result<DiagramVector> {
    require(c, Space::B)?;
    require(x, Space::B)?;
    bilinear(c, x, Space::B, |a, b| Ok(cap_diagram(a, b)))
}

/// `Σ_k x^k / k!` with terms of more than `vmax` internal vertices dropped.
pub fn exp_truncated(x: &DiagramVector, vmax: usize) -> Result<DiagramVector> {
    require(x, Space::B)?;
    if x.terms().any(|(d, _)| d.grading().v == 0) {
        return Err(Error::Grading("exp needs every term to have internal vertices".into()));
    }
    let x = x.truncated(vmax);
    let mut out = DiagramVector::one(Space::B);
    let mut power = DiagramVector::one(Space::B);
    let mut k = 1u32;
    loop {
        power = disjoint_union(&power, &x)?.truncated(vmax);
        if power.is_zero() {
            return Ok(out);
        }
        out = out.add(&power.scaled(&frac(factorial(k as usize))))?;
        k += 1;
    }
}

/// `exp(Σ b_{2i} w_{2i})` truncated at `vmax` internal vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WheelsElement {
    pub vmax: usize,
    #[serde(serialize_with = "coefficients")]
    pub coefficients: Vec<Rational>,
    #[serde(skip)]
    pub vector: DiagramVector,
}

fn coefficients<S: serde::Serializer>(c: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(crate::rational::format))
}

pub fn omega(vmax: usize) -> WheelsElement {
    let coefficients = wheel_coefficients(vmax / 2);
    let mut log = DiagramVector::zero(Space::B);
    for (k, b) in coefficients.iter().enumerate() {
        let w = Diagram::wheel(2 * (k + 1)).expect("even wheel");
        log.add_term(&w, b.clone());
    }
    let vector = exp_truncated(&log, vmax).expect("wheels have internal vertices");
    WheelsElement {
        vmax,
        coefficients,
        vector,
    }
}

impl WheelsElement {
    /// `Ω ∩ x`; exact when `vmax` is at least the leg count of every term of `x`.
    pub fn cap(&self, x: &DiagramVector) -> Result<DiagramVector> {
        cap(&self.vector, x)
    }
}

/// `Ω ∩ x` with `Ω` truncated just high enough for `x`.
pub fn omega_cap(x: &DiagramVector) -> Result<DiagramVector> {
    let legs = x.terms().map(|(d, _)| d.grading().l).max().unwrap_or(0);
    omega(legs).cap(x)
}

/// Compares `χ(Ω∩(a⊔b))` with `χ(Ω∩a) # χ(Ω∩b)` modulo relations.
pub fn verify_wheeling(store: &BasisStore, a: &DiagramVector, b: &DiagramVector) -> Result<bool> {
    let lhs = chi(&omega_cap(&disjoint_union(a, b)?)?)?;
    let rhs = connect_sum(&chi(&omega_cap(a)?)?, &chi(&omega_cap(b)?)?)?;
    store.equal_mod_relations(&lhs, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::named;
    use crate::rational::{int, rat};
    use num_traits::Signed;

    fn v(d: &Diagram) -> DiagramVector {
        DiagramVector::from_diagram(d)
    }

    fn w(k: usize) -> Diagram {
        Diagram::wheel(k).unwrap()
    }

    #[test]
    fn union_is_commutative_with_unit() {
        let theta = v(&Diagram::theta());
        let one = DiagramVector::one(Space::B);
        assert_eq!(disjoint_union(&theta, &one).unwrap(), theta);
        let (a, b) = (v(&w(2)), v(&Diagram::strut()));
        assert_eq!(disjoint_union(&a, &b).unwrap(), disjoint_union(&b, &a).unwrap());
        let ww = disjoint_union(&v(&w(2)), &v(&w(2))).unwrap();
        assert_eq!(ww.len(), 1);
        assert_eq!(ww.terms().next().unwrap().1.abs(), int(1));
    }

    #[test]
    fn connect_sum_unit_and_chords() {
        let circle = DiagramVector::one(Space::A);
        let m = v(&named::mercedes());
        assert_eq!(connect_sum(&m, &circle).unwrap(), m);
        assert_eq!(connect_sum(&circle, &m).unwrap(), m);
        let c = v(&Diagram::chord());
        assert_eq!(connect_sum(&c, &c).unwrap(), v(&named::parallel_chords()));
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&DiagramVector::one(Space::B)).unwrap(), DiagramVector::one(Space::A));
        assert_eq!(chi(&v(&Diagram::strut())).unwrap(), v(&Diagram::chord()));
        let x = chi(&v(&w(2))).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(x.terms().next().unwrap().1.abs(), int(1));
        // three orders of three legs up to rotation, two cyclic classes
        let two_struts = disjoint_union(&v(&Diagram::strut()), &v(&Diagram::strut())).unwrap();
        let expected = v(&named::parallel_chords()).scaled(&rat(2, 3)).add(&v(&named::crossed_chords()).scaled(&rat(1, 3))).unwrap();
        assert_eq!(chi(&two_struts).unwrap(), expected);
    }

    #[test]
    fn closure_examples() {
        let theta = v(&Diagram::theta());
        let cw2 = closure(&v(&w(2))).unwrap();
        assert!(cw2 == theta || cw2 == theta.scaled(&int(-1)));
        let tripod = {
            let mut sk = Sketch::new(Space::B);
            sk.internal.push([0, 1, 2]);
            sk.legs = vec![3, 4, 5];
            sk.pair(0, 3);
            sk.pair(1, 4);
            sk.pair(2, 5);
            sk.build()
        };
        assert!(closure(&v(&tripod)).unwrap().is_zero());
        let strut = closure(&v(&Diagram::strut())).unwrap();
        assert_eq!(strut, v(&Diagram::free_loop()));
    }

    #[test]
    fn closure_of_two_wheels() {
        let ww = disjoint_union(&v(&w(2)), &v(&w(2))).unwrap();
        let cl = closure(&ww).unwrap();
        let theta2 = v(&union_diagrams(&Diagram::theta(), &Diagram::theta()));
        let ladder = v(&named::doubled_ladder());
        assert_eq!(cl.len(), 2);
        assert_eq!(cl.coeff(&union_diagrams(&Diagram::theta(), &Diagram::theta())).abs(), int(1));
        assert_eq!(cl.coeff(&named::doubled_ladder()).abs(), int(2));
        assert!(theta2.len() == 1 && ladder.len() == 1);
    }

    #[test]
    fn cap_examples() {
        let d = v(&w(2));
        assert_eq!(cap(&DiagramVector::one(Space::B), &d).unwrap(), d);
        assert!(cap(&v(&w(4)), &d).unwrap().is_zero());
        let x = cap(&d, &d).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(x.coeff(&named::doubled_ladder()).abs(), int(2));
        // strut on strut closes to a loop, twice
        let s = v(&Diagram::strut());
        assert_eq!(cap(&s, &s).unwrap(), v(&Diagram::free_loop()).scaled(&int(2)));
    }

    #[test]
    fn exp_examples() {
        let zero = DiagramVector::zero(Space::B);
        assert_eq!(exp_truncated(&zero, 4).unwrap(), DiagramVector::one(Space::B));
        let x = v(&Diagram::theta()).scaled(&rat(1, 24));
        let e = exp_truncated(&x, 4).unwrap();
        let theta2 = union_diagrams(&Diagram::theta(), &Diagram::theta());
        assert_eq!(e.len(), 3);
        assert_eq!(e.coeff(&Diagram::theta()), rat(1, 24));
        assert_eq!(e.coeff(&theta2), rat(1, 1152));
        let inv = exp_truncated(&x.scaled(&int(-1)), 4).unwrap();
        assert_eq!(disjoint_union(&e, &inv).unwrap().truncated(4), DiagramVector::one(Space::B));
        assert!(exp_truncated(&DiagramVector::one(Space::B), 4).is_err());
        assert!(exp_truncated(&v(&Diagram::strut()), 4).is_err());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(0).vector, DiagramVector::one(Space::B));
        let o2 = omega(2).vector;
        assert_eq!(o2.len(), 2);
        assert_eq!(o2.coeff(&w(2)), rat(1, 48));
        let o4 = omega(4).vector;
        assert_eq!(o4.len(), 4);
        assert_eq!(o4.coeff(&Diagram::empty()), int(1));
        assert_eq!(o4.coeff(&w(2)), rat(1, 48));
        assert_eq!(o4.coeff(&w(4)), rat(-1, 5760));
        assert_eq!(o4.coeff(&union_diagrams(&w(2), &w(2))), rat(1, 4608));
    }

    #[test]
    fn wheeling_small_cases() {
        let store = BasisStore::default();
        let one = DiagramVector::one(Space::B);
        let strut = v(&Diagram::strut());
        assert!(verify_wheeling(&store, &one, &one).unwrap());
        assert!(verify_wheeling(&store, &strut, &strut).unwrap());
    }

    #[test]
    fn connect_sum_does_not_depend_on_insertion_point() {
        let store = BasisStore::default();
        let chord = Diagram::chord();
        for a in [named::mercedes(), named::crossed_chords(), chord.clone()] {
            let e = a.grading().e;
            let reference = v(&connect_sum_at(&a, &chord, 0).unwrap());
            for pos in 1..e {
                let other = v(&connect_sum_at(&a, &chord, pos).unwrap());
                assert!(store.equal_mod_relations(&reference, &other).unwrap());
            }
        }
    }
}
