//! Contrasts: finitely supported signed measures with zero total mass.
//!
//! A contrast is the index object of the generalized random field. Atoms are
//! either point masses or uniform masses on unit cells (axis-aligned unit
//! squares centred at the atom location). Point masses carry infinite
//! self-variance under the log kernel, so they are only meaningful in
//! expressions that use cross terms or the `γ(0) = 0` convention.
//!
//! Text format (one atom per line):
//!
//! ```text
//! # support=point space=lattice
//! 0,0,1
//! 1,0,-1
//! ```

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::{Error, LatticePoint, Point, Result};

/// Absolute tolerance on the total mass of a contrast.
pub const ZERO_MASS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Support {
    Point,
    Cell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Continuum,
    Lattice,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Location {
    Continuum(Point),
    Lattice(LatticePoint),
}

impl Location {
    pub fn space(&self) -> Space {
        match self {
            Location::Continuum(_) => Space::Continuum,
            Location::Lattice(_) => Space::Lattice,
        }
    }

    pub fn to_point(&self) -> Point {
        match *self {
            Location::Continuum(p) => p,
            Location::Lattice(l) => l.to_point(),
        }
    }

    fn total_cmp(&self, other: &Location) -> Ordering {
        match (self, other) {
            (Location::Lattice(a), Location::Lattice(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_point(), other.to_point());
                a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub location: Location,
    pub support: Support,
    pub weight: f64,
}

impl Atom {
    pub fn point(x: f64, y: f64, weight: f64) -> Self {
        Atom {
            location: Location::Continuum(Point::new(x, y)),
            support: Support::Point,
            weight,
        }
    }

    pub fn lattice(s: i64, t: i64, weight: f64) -> Self {
        Atom {
            location: Location::Lattice(LatticePoint::new(s, t)),
            support: Support::Point,
            weight,
        }
    }

    /// Unit cell centred at the integer point `(s, t)`.
    pub fn cell(s: i64, t: i64, weight: f64) -> Self {
        Atom {
            location: Location::Lattice(LatticePoint::new(s, t)),
            support: Support::Cell,
            weight,
        }
    }
}

/// A canonical zero-mass signed measure: atoms sorted, distinct, nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Contrast {
    space: Space,
    support: Support,
    atoms: Vec<Atom>,
}

/// Outcome of the finiteness check on `∫∫ |log‖x−y‖| |σ|(dx) |σ|(dy)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Finiteness {
    pub finite: bool,
    /// Set for point support: self-terms are infinite and only the
    /// zero-lag convention or cross terms make sense.
    pub point_support: bool,
}

impl Contrast {
    /// Builds a canonical contrast from a nonempty list of atoms.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let first = atoms
            .first()
            .ok_or_else(|| Error::InvalidInput("contrast needs at least one atom".into()))?;
        let (space, support) = (first.location.space(), first.support);
        for a in &atoms {
            if a.support != support {
                return Err(Error::MixedSupport("point and cell atoms mixed".into()));
            }
            if a.location.space() != space {
                return Err(Error::MixedSupport("continuum and lattice atoms mixed".into()));
            }
            if !a.weight.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite weight {}", a.weight)));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if total.abs() > ZERO_MASS_TOL {
            return Err(Error::NonzeroMass { total });
        }
        Ok(Self::canonicalize(space, support, atoms))
    }

    /// The empty contrast of a given kind.
    pub fn empty(space: Space, support: Support) -> Self {
        Contrast {
            space,
            support,
            atoms: Vec::new(),
        }
    }

    /// Difference of two unit point masses `δ_p − δ_q` on the lattice.
    pub fn lattice_dipole(p: LatticePoint, q: LatticePoint) -> Self {
        Self::canonicalize(
            Space::Lattice,
            Support::Point,
            vec![Atom::lattice(p.s, p.t, 1.0), Atom::lattice(q.s, q.t, -1.0)],
        )
    }

    fn canonicalize(space: Space, support: Support, mut atoms: Vec<Atom>) -> Self {
        let scale = atoms.iter().fold(0.0f64, |m, a| m.max(a.weight.abs()));
        let drop_below = 1e-15 * scale;
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.location.total_cmp(&a.location) == Ordering::Equal => {
                    last.weight += a.weight;
                }
                _ => merged.push(a),
            }
        }
        merged.retain(|a| a.weight.abs() > drop_below && a.weight != 0.0);
        Contrast {
            space,
            support,
            atoms: merged,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `bσ + dν`, canonicalized.
    pub fn linear_combine(b: f64, sigma: &Contrast, d: f64, nu: &Contrast) -> Result<Contrast> {
        if sigma.space != nu.space || sigma.support != nu.support {
            return Err(Error::MixedSupport(
                "linear combination of contrasts of different kinds".into(),
            ));
        }
        let atoms = sigma
            .atoms
            .iter()
            .map(|a| Atom {
                weight: b * a.weight,
                ..*a
            })
            .chain(nu.atoms.iter().map(|a| Atom {
                weight: d * a.weight,
                ..*a
            }))
            .collect();
        Ok(Self::canonicalize(sigma.space, sigma.support, atoms))
    }

    /// Canonical form; idempotent on already canonical contrasts.
    pub fn canonical(&self) -> Contrast {
        Self::canonicalize(self.space, self.support, self.atoms.clone())
    }

    pub fn check_finiteness(&self) -> Finiteness {
        match self.support {
            Support::Cell => Finiteness {
                finite: true,
                point_support: false,
            },
            // canonical atoms are distinct, so all cross pairs are at positive distance
            Support::Point => Finiteness {
                finite: true,
                point_support: true,
            },
        }
    }

    /// Weight at a lattice location (0 if absent).
    pub fn weight_at(&self, p: LatticePoint) -> f64 {
        self.atoms
            .iter()
            .find(|a| a.location == Location::Lattice(p))
            .map_or(0.0, |a| a.weight)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# support={} space={}\n",
            match self.support {
                Support::Point => "point",
                Support::Cell => "cell",
            },
            match self.space {
                Space::Continuum => "continuum",
                Space::Lattice => "lattice",
            }
        );
        for a in &self.atoms {
            match a.location {
                Location::Lattice(l) => writeln!(out, "{},{},{}", l.s, l.t, a.weight),
                Location::Continuum(p) => writeln!(out, "{},{},{}", p.x, p.y, a.weight),
            }
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Contrast> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty contrast file".into()))?;
        let header = header
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse(format!("missing header line, got {header:?}")))?;
        let (mut support, mut space) = (None, None);
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("support", "point")) => support = Some(Support::Point),
                Some(("support", "cell")) => support = Some(Support::Cell),
                Some(("space", "continuum")) => space = Some(Space::Continuum),
                Some(("space", "lattice")) => space = Some(Space::Lattice),
                _ => return Err(Error::Parse(format!("bad header field {field:?}"))),
            }
        }
        let support = support.ok_or_else(|| Error::Parse("header lacks support=".into()))?;
        let space = space.ok_or_else(|| Error::Parse("header lacks space=".into()))?;

        let mut atoms = Vec::new();
        for line in lines.filter(|l| !l.starts_with('#')) {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let [x, y, w] = cols[..] else {
                return Err(Error::Parse(format!("expected x,y,weight: {line:?}")));
            };
            let weight: f64 = parse(w)?;
            let location = match space {
                Space::Lattice => Location::Lattice(LatticePoint::new(parse(x)?, parse(y)?)),
                Space::Continuum => Location::Continuum(Point::new(parse(x)?, parse(y)?)),
            };
            atoms.push(Atom {
                location,
                support,
                weight,
            });
        }
        if atoms.is_empty() {
            return Ok(Contrast::empty(space, support));
        }
        Contrast::new(atoms)
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("cannot parse {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dipole(a: (i64, i64), b: (i64, i64)) -> Contrast {
        Contrast::new(vec![Atom::lattice(a.0, a.1, 1.0), Atom::lattice(b.0, b.1, -1.0)]).unwrap()
    }

    #[test]
    fn two_point_contrast() {
        let c = Contrast::new(vec![Atom::point(0.0, 0.0, 1.0), Atom::point(1.0, 0.0, -1.0)]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.total_mass(), 0.0);
    }

    #[test]
    fn coincident_atoms_cancel() {
        let c = Contrast::new(vec![Atom::point(0.0, 0.0, 1.0), Atom::point(0.0, 0.0, -1.0)]).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn nonzero_mass_rejected() {
        let err = Contrast::new(vec![Atom::point(0.0, 0.0, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::NonzeroMass { .. }));
    }

    #[test]
    fn mixed_support_rejected() {
        let err = Contrast::new(vec![Atom::lattice(0, 0, 1.0), Atom::cell(1, 0, -1.0)]).unwrap_err();
        assert!(matches!(err, Error::MixedSupport(_)));
        let err = Contrast::new(vec![Atom::lattice(0, 0, 1.0), Atom::point(1.0, 0.0, -1.0)]).unwrap_err();
        assert!(matches!(err, Error::MixedSupport(_)));
    }

    #[test]
    fn empty_input_rejected() {
        assert!(Contrast::new(vec![]).is_err());
    }

    #[test]
    fn combine_examples() {
        let s = dipole((0, 0), (1, 0));
        assert!(Contrast::linear_combine(1.0, &s, -1.0, &s).unwrap().is_empty());

        let doubled = Contrast::linear_combine(2.0, &s, 0.0, &dipole((5, 5), (6, 6))).unwrap();
        assert_eq!(doubled, Contrast::new(vec![Atom::lattice(0, 0, 2.0), Atom::lattice(1, 0, -2.0)]).unwrap());

        let tele = Contrast::linear_combine(1.0, &s, 1.0, &dipole((1, 0), (2, 0))).unwrap();
        assert_eq!(tele, dipole((0, 0), (2, 0)));
    }

    #[test]
    fn combine_rejects_mixed_kinds() {
        let cells = Contrast::new(vec![Atom::cell(0, 0, 1.0), Atom::cell(1, 0, -1.0)]).unwrap();
        assert!(Contrast::linear_combine(1.0, &dipole((0, 0), (1, 0)), 1.0, &cells).is_err());
    }

    #[test]
    fn finiteness_flags() {
        let cells = Contrast::new(vec![Atom::cell(0, 0, 1.0), Atom::cell(0, 0, 1.0), Atom::cell(3, 1, -2.0)]).unwrap();
        assert_eq!(cells.check_finiteness(), Finiteness { finite: true, point_support: false });
        let pts = Contrast::new(vec![
            Atom::point(0.0, 0.0, 1.0),
            Atom::point(0.0, 0.0, 1.0),
            Atom::point(2.0, 0.0, -2.0),
        ])
        .unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts.check_finiteness(), Finiteness { finite: true, point_support: true });
    }

    #[test]
    fn csv_round_trip() {
        let c = Contrast::new(vec![Atom::cell(0, 0, 0.5), Atom::cell(-3, 2, -0.25), Atom::cell(1, 1, -0.25)]).unwrap();
        let text = c.to_csv();
        assert!(text.starts_with("# support=cell space=lattice\n"));
        assert_eq!(Contrast::from_csv(&text).unwrap(), c);
        assert!(Contrast::from_csv("0,0,1\n").is_err());
        assert!(Contrast::from_csv("# support=point space=continuum\n0,0,1\n").is_err());
    }

    fn lattice_atoms() -> impl Strategy<Value = Vec<Atom>> {
        prop::collection::vec((-4i64..4, -4i64..4, -5.0f64..5.0), 1..12).prop_map(|raw| {
            let mut atoms: Vec<Atom> = raw.iter().map(|&(s, t, w)| Atom::lattice(s, t, w)).collect();
            let total: f64 = atoms.iter().map(|a| a.weight).sum();
            atoms.push(Atom::lattice(9, 9, -total));
            atoms
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn constructed_contrasts_have_zero_mass(atoms in lattice_atoms()) {
            let c = Contrast::new(atoms).unwrap();
            prop_assert!(c.total_mass().abs() <= ZERO_MASS_TOL);
        }

        #[test]
        fn canonicalization_is_idempotent(atoms in lattice_atoms()) {
            let c = Contrast::new(atoms).unwrap();
            prop_assert_eq!(c.canonical(), c);
        }

        #[test]
        fn linear_combine_is_bilinear(a in lattice_atoms(), b in lattice_atoms(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
            let (sa, sb) = (Contrast::new(a).unwrap(), Contrast::new(b).unwrap());
            let comb = Contrast::linear_combine(x, &sa, y, &sb).unwrap();
            for s in -4..=9 {
                for t in -4..=9 {
                    let p = LatticePoint::new(s, t);
                    let expect = x * sa.weight_at(p) + y * sb.weight_at(p);
                    prop_assert!((comb.weight_at(p) - expect).abs() <= 1e-14);
                }
            }
        }
    }
}
