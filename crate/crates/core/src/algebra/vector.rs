use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::diagram::{canonicalize, Diagram, Piece, RawDiagram, Space};
use crate::error::{DiagramError, Error, Result};
use crate::rational::{self, Rational};

/// A finite rational combination of canonical diagrams of one space.
///
/// Keys are canonical diagrams with the canonicalization sign folded into the
/// coefficient; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramVector {
    space: Space,
    terms: BTreeMap<Diagram, Rational>,
}

impl DiagramVector {
    pub fn zero(space: Space) -> Self {
        DiagramVector {
            space,
            terms: BTreeMap::new(),
        }
    }

    /// The unit: the empty diagram in `B`, the bare circle in `A`.
    pub fn one(space: Space) -> Self {
        let d = match space {
            Space::A => Diagram::bare_circle(),
            Space::B => Diagram::empty(),
        };
        Self::from_diagram(&d)
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        let mut v = Self::zero(d.space());
        v.add_term(d, Rational::from_integer(1.into()));
        v
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of the class of `d` (sign-adjusted to `d` itself).
    pub fn coeff(&self, d: &Diagram) -> Rational {
        let c = canonicalize(d);
        match self.terms.get(&c.diagram) {
            Some(x) if c.sign != 0 => x * Rational::from_integer(c.sign.into()),
            _ => Rational::zero(),
        }
    }

    /// Adds `c * d`. Panics if `d` lives in the other space.
    pub fn add_term(&mut self, d: &Diagram, c: Rational) {
        assert_eq!(d.space(), self.space, "diagram space does not match vector");
        let cf = canonicalize(d);
        if cf.sign == 0 {
            return;
        }
        let c = if cf.sign < 0 { -c } else { c };
        self.add_canonical(cf.diagram, c);
    }

    pub(crate) fn add_canonical(&mut self, d: Diagram, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(d) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(DiagramError::SpaceMismatch {
                expected: self.space,
                found: other.space,
            }
            .into());
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_canonical(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(&Rational::from_integer((-1).into())))
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.space);
        if !c.is_zero() {
            for (d, x) in &self.terms {
                out.terms.insert(d.clone(), x * c);
            }
        }
        out
    }

    /// Linear extension of a map on diagrams.
    pub fn map_linear<F>(&self, target: Space, mut f: F) -> Result<Self>
    where
        F: FnMut(&Diagram) -> Result<DiagramVector>,
    {
        let mut out = Self::zero(target);
        for (d, c) in &self.terms {
            let image = f(d)?;
            out.check_space(&image)?;
            for (e, x) in image.terms {
                out.add_canonical(e, x * c);
            }
        }
        Ok(out)
    }

    /// Splits into homogeneous pieces.
    pub fn pieces(&self) -> BTreeMap<Piece, DiagramVector> {
        let mut out: BTreeMap<Piece, DiagramVector> = BTreeMap::new();
        for (d, c) in &self.terms {
            out.entry(d.piece())
                .or_insert_with(|| Self::zero(self.space))
                .terms
                .insert(d.clone(), c.clone());
        }
        out
    }

    /// Drops every term with more than `vmax` internal vertices.
    pub fn truncated(&self, vmax: usize) -> Self {
        DiagramVector {
            space: self.space,
            terms: self
                .terms
                .iter()
                .filter(|(d, _)| d.grading().v <= vmax)
                .map(|(d, c)| (d.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> VectorJson {
        VectorJson {
            space: Some(self.space),
            terms: self
                .terms
                .iter()
                .map(|(d, c)| Term {
                    coeff: c.clone(),
                    diagram: d.clone(),
                })
                .collect(),
        }
    }

    /// Builds a vector from wire terms; `space` is required when there are none.
    pub fn from_terms(space: Option<Space>, terms: &[Term]) -> Result<Self> {
        let space = space
            .or_else(|| terms.first().map(|t| t.diagram.space()))
            .ok_or_else(|| Error::Format("empty vector needs an explicit space".into()))?;
        let mut out = Self::zero(space);
        for t in terms {
            if t.diagram.space() != space {
                return Err(DiagramError::SpaceMismatch {
                    expected: space,
                    found: t.diagram.space(),
                }
                .into());
            }
            out.add_term(&t.diagram, t.coeff.clone());
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "rational::text")]
    pub coeff: Rational,
    pub diagram: Diagram,
}

/// Wire form of a vector: `{"space": .., "terms": [{"coeff", "diagram"}, ..]}`.
/// A bare array of terms is accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<Space>,
    pub terms: Vec<Term>,
}

impl VectorJson {
    pub fn parse(text: &str) -> Result<DiagramVector> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        Self::from_value(value)
    }

    /// Shape errors are reported as malformed input, invalid diagrams as
    /// diagram errors.
    pub fn from_value(value: serde_json::Value) -> Result<DiagramVector> {
        let wire: WireVector = if value.is_array() {
            WireVector {
                space: None,
                terms: serde_json::from_value(value)?,
            }
        } else {
            serde_json::from_value(value)?
        };
        let terms = wire
            .terms
            .into_iter()
            .map(|t| {
                Ok(Term {
                    coeff: t.coeff,
                    diagram: t.diagram.validate()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        DiagramVector::from_terms(wire.space, &terms)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireTerm {
    #[serde(with = "rational::text")]
    coeff: Rational,
    diagram: RawDiagram,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireVector {
    #[serde(default)]
    space: Option<Space>,
    terms: Vec<WireTerm>,
}
