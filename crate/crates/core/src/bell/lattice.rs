use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

/// Link orientation class. Each site carries at most one link of each color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkColor {
    #[serde(rename = "r")]
    Red,
    #[serde(rename = "b")]
    Blue,
    #[serde(rename = "g")]
    Green,
}

impl LinkColor {
    pub const ALL: [LinkColor; 3] = [LinkColor::Red, LinkColor::Blue, LinkColor::Green];
}

/// `(site on A, site on B, color)`; serialised as a JSON triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Link(pub usize, pub usize, pub LinkColor);

impl Link {
    pub fn a(&self) -> usize {
        self.0
    }
    pub fn b(&self) -> usize {
        self.1
    }
    pub fn color(&self) -> LinkColor {
        self.2
    }
}

/// A bipartite brick-wall (honeycomb) lattice.
///
/// ```json
/// {"num_sites": 2, "sublattice": ["A", "B"], "links": [[0, 1, "r"]]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoneycombLattice {
    pub num_sites: usize,
    pub sublattice: Vec<Sublattice>,
    pub links: Vec<Link>,
}

impl HoneycombLattice {
    pub fn new(num_sites: usize, sublattice: Vec<Sublattice>, links: Vec<Link>) -> Result<Self> {
        let lat = Self {
            num_sites,
            sublattice,
            links,
        };
        lat.validate()?;
        Ok(lat)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidLattice(m));
        if self.sublattice.len() != self.num_sites {
            return bad(format!(
                "{} sublattice labels for {} sites",
                self.sublattice.len(),
                self.num_sites
            ));
        }
        if self.links.is_empty() {
            return bad("no links".into());
        }
        let mut seen_color = HashSet::new();
        let mut seen_pair = HashSet::new();
        for (k, l) in self.links.iter().enumerate() {
            if l.a() >= self.num_sites || l.b() >= self.num_sites {
                return bad(format!("link {k} references a site outside 0..{}", self.num_sites));
            }
            if self.sublattice[l.a()] != Sublattice::A || self.sublattice[l.b()] != Sublattice::B {
                return bad(format!("link {k} ({}, {}) does not run from A to B", l.a(), l.b()));
            }
            if !seen_pair.insert((l.a(), l.b())) {
                return bad(format!("duplicate link between {} and {}", l.a(), l.b()));
            }
            for site in [l.a(), l.b()] {
                if !seen_color.insert((site, l.color())) {
                    return bad(format!("site {site} has two {:?} links", l.color()));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let lat: Self = serde_json::from_str(text)?;
        lat.validate()?;
        Ok(lat)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn links_of(&self, color: LinkColor) -> impl Iterator<Item = &Link> {
        self.links.iter().filter(move |l| l.color() == color)
    }

    pub fn count(&self, color: LinkColor) -> usize {
        self.links_of(color).count()
    }

    /// Brick-wall patch with one row per entry of `row_lengths`, all rows
    /// left-aligned. Site `(r, c)` is on A when `r + c + parity` is even.
    /// Vertical links (A above B) are red; a horizontal link is blue when its
    /// A site is on the left and green otherwise. Sites are numbered row-major.
    pub fn brick_wall(row_lengths: &[usize], parity: usize) -> Result<Self> {
        let mut index = Vec::with_capacity(row_lengths.len());
        let mut sublattice = Vec::new();
        for (r, &len) in row_lengths.iter().enumerate() {
            let mut row = Vec::with_capacity(len);
            for c in 0..len {
                row.push(sublattice.len());
                sublattice.push(if (r + c + parity) % 2 == 0 {
                    Sublattice::A
                } else {
                    Sublattice::B
                });
            }
            index.push(row);
        }
        let mut links = Vec::new();
        for (r, row) in index.iter().enumerate() {
            for c in 0..row.len() {
                let here = row[c];
                if sublattice[here] == Sublattice::A {
                    if let Some(&below) = index.get(r + 1).and_then(|next| next.get(c)) {
                        links.push(Link(here, below, LinkColor::Red));
                    }
                }
                if let Some(&right) = row.get(c + 1) {
                    if sublattice[here] == Sublattice::A {
                        links.push(Link(here, right, LinkColor::Blue));
                    } else {
                        links.push(Link(right, here, LinkColor::Green));
                    }
                }
            }
        }
        Self::new(sublattice.len(), sublattice, links)
    }

    pub fn brick_wall_rect(rows: usize, cols: usize) -> Result<Self> {
        Self::brick_wall(&vec![cols; rows], 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_site_patch_has_two_links_per_color() {
        let lat = HoneycombLattice::brick_wall_rect(2, 3).unwrap();
        assert_eq!(lat.num_sites, 6);
        for c in LinkColor::ALL {
            assert_eq!(lat.count(c), 2, "{c:?}");
        }
    }

    #[test]
    fn seventy_three_site_strip() {
        let mut rows = vec![6, 6, 6];
        rows.extend(std::iter::repeat(5).take(11));
        let lat = HoneycombLattice::brick_wall(&rows, 1).unwrap();
        assert_eq!(lat.num_sites, 73);
        assert_eq!(lat.count(LinkColor::Red), 33);
        assert_eq!(lat.count(LinkColor::Blue) + lat.count(LinkColor::Green), 59);
    }

    #[test]
    fn json_round_trip_and_format() {
        let text = r#"{"num_sites": 2, "sublattice": ["A", "B"], "links": [[0, 1, "r"]]}"#;
        let lat = HoneycombLattice::from_json(text).unwrap();
        assert_eq!(lat.links, vec![Link(0, 1, LinkColor::Red)]);
        let again = HoneycombLattice::from_json(&lat.to_json().unwrap()).unwrap();
        assert_eq!(again, lat);
    }

    #[test]
    fn rejects_invalid_lattices() {
        let cases = [
            r#"{"num_sites": 2, "sublattice": ["A", "A"], "links": [[0, 1, "r"]]}"#,
            r#"{"num_sites": 2, "sublattice": ["A", "B"], "links": [[1, 0, "r"]]}"#,
            r#"{"num_sites": 2, "sublattice": ["A", "B"], "links": []}"#,
            r#"{"num_sites": 3, "sublattice": ["A", "B"], "links": [[0, 1, "r"]]}"#,
            r#"{"num_sites": 3, "sublattice": ["A", "B", "B"], "links": [[0, 1, "r"], [0, 2, "r"]]}"#,
            r#"{"num_sites": 2, "sublattice": ["A", "B"], "links": [[0, 5, "g"]]}"#,
            r#"{"num_sites": 2, "sublattice": ["A", "B"], "links": [[0, 1, "x"]]}"#,
            r#"{"num_sites": 2, "sublattice": ["A", "B"], "links": [[0, 1, "r"]], "extra": 1}"#,
        ];
        for c in cases {
            assert!(HoneycombLattice::from_json(c).is_err(), "{c}");
        }
    }
}
