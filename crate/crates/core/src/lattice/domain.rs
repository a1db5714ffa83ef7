//! Finite lattice domains: an interior set enclosed by a boundary set.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::Rng;

use crate::{Error, LatticePoint, Result};

/// Interior and boundary point sets on `Z²`.
///
/// Every nearest neighbour of an interior point is itself interior or on the
/// boundary, so a walk started inside must hit the boundary before leaving.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeDomain {
    interior: Vec<LatticePoint>,
    boundary: Vec<LatticePoint>,
    interior_index: HashMap<LatticePoint, usize>,
    boundary_index: HashMap<LatticePoint, usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Interior,
    Boundary,
}

impl LatticeDomain {
    /// Validates and builds a domain. Points are stored sorted.
    pub fn new(interior: impl IntoIterator<Item = LatticePoint>, boundary: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        let interior: BTreeSet<LatticePoint> = interior.into_iter().collect();
        let boundary: BTreeSet<LatticePoint> = boundary.into_iter().collect();
        if interior.is_empty() {
            return Err(Error::InvalidDomain("interior is empty".into()));
        }
        if let Some(p) = interior.intersection(&boundary).next() {
            return Err(Error::InvalidDomain(format!("{p} is both interior and boundary")));
        }
        for p in &interior {
            for q in p.neighbors() {
                if !interior.contains(&q) && !boundary.contains(&q) {
                    return Err(Error::InvalidDomain(format!(
                        "neighbour {q} of interior point {p} is neither interior nor boundary"
                    )));
                }
            }
        }
        let interior: Vec<LatticePoint> = interior.into_iter().collect();
        let boundary: Vec<LatticePoint> = boundary.into_iter().collect();
        let interior_index = interior.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let boundary_index = boundary.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(LatticeDomain {
            interior,
            boundary,
            interior_index,
            boundary_index,
        })
    }

    /// Interior set with the points at Chebyshev distance one outside it as
    /// boundary (the full combinatorial boundary, corners included).
    pub fn from_interior(interior: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        let interior: BTreeSet<LatticePoint> = interior.into_iter().collect();
        let boundary: BTreeSet<LatticePoint> = interior
            .iter()
            .flat_map(|p| p.king_neighbors())
            .filter(|q| !interior.contains(q))
            .collect();
        Self::new(interior, boundary)
    }

    /// `width × height` interior rectangle whose lower-left corner is
    /// `corner`.
    pub fn rectangle(corner: LatticePoint, width: i64, height: i64) -> Result<Self> {
        if width < 1 || height < 1 {
            return Err(Error::InvalidDomain(format!("rectangle {width}x{height} is empty")));
        }
        Self::from_interior((0..width).flat_map(|i| (0..height).map(move |j| LatticePoint::new(corner.s + i, corner.t + j))))
    }

    /// `k × k` interior box containing the origin, centred when `k` is odd.
    pub fn square_box(k: i64) -> Result<Self> {
        let lo = -(k - 1) / 2;
        Self::rectangle(LatticePoint::new(lo, lo), k, k)
    }

    /// Random hole-free interior of `n` grown cells around the origin (more
    /// after hole filling), with its combinatorial boundary.
    pub fn random_simply_connected<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut set: BTreeSet<LatticePoint> = BTreeSet::from([LatticePoint::ORIGIN]);
        let mut frontier: Vec<LatticePoint> = LatticePoint::ORIGIN.neighbors().to_vec();
        while set.len() < n.max(1) {
            let k = rng.random_range(0..frontier.len());
            let p = frontier.swap_remove(k);
            if set.insert(p) {
                frontier.extend(p.neighbors().into_iter().filter(|q| !set.contains(q)));
            }
        }
        fill_holes(&mut set);
        Self::from_interior(set)
    }

    pub fn interior(&self) -> &[LatticePoint] {
        &self.interior
    }

    pub fn boundary(&self) -> &[LatticePoint] {
        &self.boundary
    }

    pub fn interior_index(&self, p: LatticePoint) -> Option<usize> {
        self.interior_index.get(&p).copied()
    }

    pub fn boundary_index(&self, p: LatticePoint) -> Option<usize> {
        self.boundary_index.get(&p).copied()
    }

    pub fn role(&self, p: LatticePoint) -> Option<Role> {
        if self.interior_index.contains_key(&p) {
            Some(Role::Interior)
        } else if self.boundary_index.contains_key(&p) {
            Some(Role::Boundary)
        } else {
            None
        }
    }

    /// Largest Chebyshev distance between two domain points.
    pub fn diameter(&self) -> i64 {
        let all: Vec<LatticePoint> = self.interior.iter().chain(&self.boundary).copied().collect();
        let span = |f: fn(&LatticePoint) -> i64| {
            let lo = all.iter().map(f).min().unwrap_or(0);
            let hi = all.iter().map(f).max().unwrap_or(0);
            hi - lo
        };
        span(|p| p.s).max(span(|p| p.t))
    }

    /// CSV `s,t,role`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,role\n");
        for p in &self.interior {
            writeln!(out, "{},{},interior", p.s, p.t).expect("writing to a String cannot fail");
        }
        for p in &self.boundary {
            writeln!(out, "{},{},boundary", p.s, p.t).expect("writing to a String cannot fail");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut interior = Vec::new();
        let mut boundary = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line == "s,t,role" {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("line {}: expected `s,t,role`, got `{line}`", lineno + 1));
            if fields.len() != 3 {
                return Err(bad());
            }
            let s: i64 = fields[0].parse().map_err(|_| bad())?;
            let t: i64 = fields[1].parse().map_err(|_| bad())?;
            match fields[2] {
                "interior" => interior.push(LatticePoint::new(s, t)),
                "boundary" => boundary.push(LatticePoint::new(s, t)),
                _ => return Err(bad()),
            }
        }
        Self::new(interior, boundary)
    }
}

/// Adds every point not reachable from outside the bounding box.
fn fill_holes(set: &mut BTreeSet<LatticePoint>) {
    let (lo_s, hi_s) = (set.iter().map(|p| p.s).min().unwrap() - 1, set.iter().map(|p| p.s).max().unwrap() + 1);
    let (lo_t, hi_t) = (set.iter().map(|p| p.t).min().unwrap() - 1, set.iter().map(|p| p.t).max().unwrap() + 1);
    let inside = |p: &LatticePoint| (lo_s..=hi_s).contains(&p.s) && (lo_t..=hi_t).contains(&p.t);
    let start = LatticePoint::new(lo_s, lo_t);
    let mut outside = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(p) = stack.pop() {
        for q in p.neighbors() {
            if inside(&q) && !set.contains(&q) && outside.insert(q) {
                stack.push(q);
            }
        }
    }
    for s in lo_s..=hi_s {
        for t in lo_t..=hi_t {
            let p = LatticePoint::new(s, t);
            if !outside.contains(&p) {
                set.insert(p);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::worker_rng;

    #[test]
    fn box_boundary_sizes() {
        let d = LatticeDomain::square_box(3).unwrap();
        assert_eq!(d.interior().len(), 9);
        assert_eq!(d.boundary().len(), 16);
        assert!(d.interior_index(LatticePoint::ORIGIN).is_some());
        assert_eq!(LatticeDomain::square_box(1).unwrap().boundary().len(), 8);
        assert_eq!(d.diameter(), 4);
    }

    #[test]
    fn rejects_leaky_domains() {
        let o = LatticePoint::ORIGIN;
        let nb = o.neighbors();
        assert!(LatticeDomain::new([o], nb[..3].to_vec()).is_err());
        assert!(LatticeDomain::new([o], nb.to_vec()).is_ok());
        assert!(LatticeDomain::new([o], [o]).is_err());
        assert!(LatticeDomain::new([], nb.to_vec()).is_err());
    }

    #[test]
    fn random_domains_are_hole_free() {
        for seed in 0..20 {
            let d = LatticeDomain::random_simply_connected(30, &mut worker_rng(seed, 0)).unwrap();
            assert!(d.interior().len() >= 30);
            // the boundary ring is 8-connected to the outside: no boundary
            // point is enclosed by interior points only
            let mut set: BTreeSet<LatticePoint> = d.interior().iter().copied().collect();
            let before = set.len();
            fill_holes(&mut set);
            assert_eq!(set.len(), before);
        }
    }

    #[test]
    fn csv_round_trip() {
        let d = LatticeDomain::rectangle(LatticePoint::new(2, -1), 3, 2).unwrap();
        let back = LatticeDomain::from_csv(&d.to_csv()).unwrap();
        assert_eq!(d, back);
        assert!(LatticeDomain::from_csv("0,0,inside\n").is_err());
    }
}
