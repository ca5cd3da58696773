//! Sparse exact row reduction.
//!
//! Rows are eliminated fraction-free over the integers, dividing out the
//! content after each step, then back-substituted into reduced echelon form
//! over the rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type IntRow = Vec<(usize, BigInt)>;
pub type RatRow = Vec<(usize, Rational)>;

/// Clears denominators and content, leading coefficient positive.
pub fn primitive(row: &[(usize, Rational)]) -> IntRow {
    let lcm = row.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut out: IntRow = row
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (*j, c.numer() * (&lcm / c.denom())))
        .collect();
    out.sort_by_key(|(j, _)| *j);
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    if g.is_zero() {
        return;
    }
    let g = if row[0].1.is_negative() { -g } else { g };
    for (_, c) in row.iter_mut() {
        *c = &*c / &g;
    }
}

/// `a * x - b * y` on sorted sparse rows.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let c = a * &x[i].1 - b * &y[j].1;
            if !c.is_zero() {
                out.push((x[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form keyed by leading column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, IntRow>,
}

impl Echelon {
    /// Inserts a row; returns whether it raised the rank.
    pub fn insert(&mut self, mut row: IntRow) -> bool {
        loop {
            let Some(&(lead, ref a)) = row.first() else {
                return false;
            };
            match self.rows.get(&lead) {
                Some(p) => {
                    let b = &p[0].1;
                    let g = a.gcd(b);
                    row = combine(&(b / &g), &row, &(a / &g), p);
                    if !row.is_empty() {
                        make_primitive(&mut row);
                    }
                }
                None => {
                    make_primitive(&mut row);
                    self.rows.insert(lead, row);
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduced echelon rows over the rationals, pivot entry one, zero in
    /// every other pivot column.
    pub fn reduced(&self) -> BTreeMap<usize, RatRow> {
        let mut done: BTreeMap<usize, RatRow> = BTreeMap::new();
        for (&pivot, row) in self.rows.iter().rev() {
            let lead = Rational::from_integer(row[0].1.clone());
            let mut acc: BTreeMap<usize, Rational> = row.iter().map(|(j, c)| (*j, Rational::from_integer(c.clone()) / &lead)).collect();
            let later: Vec<usize> = acc.keys().copied().filter(|j| *j != pivot && done.contains_key(j)).collect();
            for j in later {
                let f = acc.remove(&j).unwrap();
                for (k, c) in &done[&j] {
                    if *k == j {
                        continue;
                    }
                    let e = acc.entry(*k).or_insert_with(Rational::zero);
                    *e -= &f * c;
                }
            }
            let row: RatRow = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            done.insert(pivot, row);
        }
        done
    }
}
