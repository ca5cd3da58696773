use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{Diagram, Sketch, Space};
use crate::error::DiagramError;

/// Wire form of a diagram. Half-edge ids are arbitrary non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDiagram {
    pub space: Space,
    #[serde(default)]
    pub internal: Vec<[u64; 3]>,
    #[serde(default)]
    pub legs: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<Vec<u64>>,
    #[serde(default)]
    pub pairing: Vec<[u64; 2]>,
    #[serde(default)]
    pub free_loops: u64,
}

impl RawDiagram {
    pub fn validate(&self) -> Result<Diagram, DiagramError> {
        if self.skeleton.is_some() && !self.legs.is_empty() {
            return Err(DiagramError::MixedSpace("legs and skeleton both present"));
        }
        match (self.space, &self.skeleton) {
            (Space::A, None) => return Err(DiagramError::MixedSpace("space A requires a skeleton")),
            (Space::B, Some(_)) => return Err(DiagramError::MixedSpace("space B has no skeleton")),
            _ => {}
        }

        let mut seen = HashSet::new();
        let owned = self
            .internal
            .iter()
            .flatten()
            .chain(&self.legs)
            .chain(self.skeleton.iter().flatten());
        for &h in owned {
            if h >= u64::from(u32::MAX) {
                return Err(DiagramError::Dangling(h));
            }
            if !seen.insert(h) {
                return Err(DiagramError::HalfEdgeReused(h));
            }
        }

        let mut partner: HashMap<u32, u32> = HashMap::new();
        for &[a, b] in &self.pairing {
            if a == b {
                return Err(DiagramError::FixedPoint(a));
            }
            for h in [a, b] {
                if !seen.contains(&h) {
                    return Err(DiagramError::Dangling(h));
                }
                if partner.contains_key(&(h as u32)) {
                    return Err(DiagramError::HalfEdgeReused(h));
                }
            }
            partner.insert(a as u32, b as u32);
            partner.insert(b as u32, a as u32);
        }
        if let Some(&h) = seen.iter().filter(|h| !partner.contains_key(&(**h as u32))).min() {
            return Err(DiagramError::Dangling(h));
        }

        let free_loops = u32::try_from(self.free_loops).map_err(|_| DiagramError::Dangling(self.free_loops))?;
        Ok(Sketch {
            space: self.space,
            internal: self.internal.iter().map(|t| [t[0] as u32, t[1] as u32, t[2] as u32]).collect(),
            legs: self.legs.iter().map(|&h| h as u32).collect(),
            skeleton: self.skeleton.iter().flatten().map(|&h| h as u32).collect(),
            partner,
            free_loops,
        }
        .build())
    }
}

impl From<&Diagram> for RawDiagram {
    fn from(d: &Diagram) -> Self {
        RawDiagram {
            space: d.space,
            internal: d.internal.iter().map(|t| t.map(u64::from)).collect(),
            legs: d.legs.iter().map(|&h| u64::from(h)).collect(),
            skeleton: d.skeleton().map(|s| s.iter().map(|&h| u64::from(h)).collect()),
            pairing: d.edges().into_iter().map(|(a, b)| [u64::from(a), u64::from(b)]).collect(),
            free_loops: u64::from(d.free_loops),
        }
    }
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawDiagram::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawDiagram::deserialize(d)?;
        raw.validate().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Diagram, DiagramError> {
        serde_json::from_str::<RawDiagram>(s).unwrap().validate()
    }

    #[test]
    fn theta_description_is_valid() {
        let d = parse(r#"{"space":"B","internal":[[10,11,12],[20,21,22]],"legs":[],"pairing":[[10,20],[11,21],[12,22]]}"#)
            .unwrap();
        assert_eq!(d, Diagram::theta());
    }

    #[test]
    fn reused_half_edge_is_rejected() {
        let e = parse(r#"{"space":"B","internal":[[0,1,2],[2,3,4]],"pairing":[[0,1],[2,3]]}"#);
        assert_eq!(e, Err(DiagramError::HalfEdgeReused(2)));
    }

    #[test]
    fn legs_with_skeleton_is_mixed_space() {
        let e = parse(r#"{"space":"A","legs":[0],"skeleton":[1],"pairing":[[0,1]]}"#);
        assert!(matches!(e, Err(DiagramError::MixedSpace(_))));
        let e = parse(r#"{"space":"B","skeleton":[0,1],"pairing":[[0,1]]}"#);
        assert!(matches!(e, Err(DiagramError::MixedSpace(_))));
    }

    #[test]
    fn fixed_points_and_dangling_ends() {
        assert_eq!(parse(r#"{"space":"B","legs":[0,1],"pairing":[[0,0]]}"#), Err(DiagramError::FixedPoint(0)));
        assert_eq!(parse(r#"{"space":"B","legs":[0,1],"pairing":[[0,1],[1,0]]}"#), Err(DiagramError::HalfEdgeReused(1)));
        assert_eq!(parse(r#"{"space":"B","legs":[0,1],"pairing":[]}"#), Err(DiagramError::Dangling(0)));
        assert_eq!(parse(r#"{"space":"B","legs":[0],"pairing":[[0,7]]}"#), Err(DiagramError::Dangling(7)));
    }

    #[test]
    fn emitted_json_reads_back() {
        let w = Diagram::wheel(4).unwrap();
        let text = serde_json::to_string(&w).unwrap();
        let back: Diagram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        let c = serde_json::to_string(&Diagram::chord()).unwrap();
        assert_eq!(c, r#"{"space":"A","internal":[],"legs":[],"skeleton":[0,1],"pairing":[[0,1]],"free_loops":0}"#);
    }
}
