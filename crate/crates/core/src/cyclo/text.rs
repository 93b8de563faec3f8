//! Line-oriented text format for relation lattices and place tables.
//!
//! ```text
//! relation-lattice 1
//! level 6
//! relation torsion : 2 0 0 0 0 0 0
//! relation inversion 1 : -1 1 -1 0 0 0 1
//! relation distribution 2 1 : 0 0 -1 1 0 -1 0
//! end
//! ```
//!
//! Vectors follow the generator order `[-1, zeta, u_1, ..., u_{M-1}]`. Every
//! integer is written in decimal. Loaded relations are re-verified by exact
//! evaluation before use.
//!
//! ```text
//! place-table 1
//! level 12
//! place 3 0 unit : 1 0 1
//! place 2 0 unit : 1 1 1
//! end
//! ```
//!
//! A `place` line holds the prime, the index, `unit` (prime divides the level)
//! or `sanity`, and the coefficients of the defining factor, lowest first.

use super::finite_field::FpPoly;
use super::formal::{CycNumFormal, Relation, RelationKind, RelationLattice};
use super::places::{place_from_factor, Place, PlaceTable};
use crate::error::{Error, Result};
use crate::linalg::Int;

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| parse_err(format!("bad integer {s:?}")))
}

fn split_header<'a>(lines: &mut impl Iterator<Item = &'a str>, magic: &str) -> Result<u64> {
    let head = lines.next().ok_or_else(|| parse_err("empty input"))?;
    if head.trim() != format!("{magic} 1") {
        return Err(parse_err(format!("expected header '{magic} 1'")));
    }
    let level = lines.next().ok_or_else(|| parse_err("missing level"))?;
    let level = level
        .trim()
        .strip_prefix("level ")
        .ok_or_else(|| parse_err("missing level line"))?;
    parse_num(level.trim())
}

pub fn lattice_to_text(lat: &RelationLattice) -> String {
    let mut out = format!("relation-lattice 1\nlevel {}\n", lat.level());
    for r in lat.relations() {
        let tag = match r.kind {
            RelationKind::Torsion => "torsion".to_string(),
            RelationKind::Inversion { a } => format!("inversion {a}"),
            RelationKind::Distribution { n, b } => format!("distribution {n} {b}"),
        };
        out.push_str(&format!("relation {tag} : {}\n", join(&r.vector)));
    }
    out.push_str("end\n");
    out
}

pub fn lattice_from_text(text: &str) -> Result<RelationLattice> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let level = split_header(&mut lines, "relation-lattice")?;
    let mut relations = Vec::new();
    for line in lines {
        let line = line.trim();
        if line == "end" {
            return finish_lattice(level, relations);
        }
        let body = line.strip_prefix("relation ").ok_or_else(|| parse_err(format!("unexpected line {line:?}")))?;
        let (tag, vec) = body.split_once(':').ok_or_else(|| parse_err("missing ':'"))?;
        let words: Vec<&str> = tag.split_whitespace().collect();
        let kind = match words.as_slice() {
            ["torsion"] => RelationKind::Torsion,
            ["inversion", a] => RelationKind::Inversion { a: parse_num(a)? },
            ["distribution", n, b] => RelationKind::Distribution { n: parse_num(n)?, b: parse_num(b)? },
            _ => return Err(parse_err(format!("unknown relation tag {tag:?}"))),
        };
        let vector: Vec<Int> = vec.split_whitespace().map(parse_num).collect::<Result<_>>()?;
        if vector.len() != CycNumFormal::ngens(level) {
            return Err(parse_err("relation vector has the wrong length"));
        }
        relations.push(Relation { kind, vector });
    }
    Err(parse_err("missing 'end'"))
}

fn finish_lattice(level: u64, relations: Vec<Relation>) -> Result<RelationLattice> {
    for r in &relations {
        if !CycNumFormal::from_vector(level, &r.vector).evaluates_to_one() {
            return Err(Error::FalseRelation(format!("{:?} at level {level}", r.kind)));
        }
    }
    RelationLattice::from_relations(level, relations)
}

pub fn places_to_text(table: &PlaceTable) -> String {
    let mut out = format!("place-table 1\nlevel {}\n", table.level());
    for w in table.iter() {
        out.push_str(&format!(
            "place {} {} {} : {}\n",
            w.ell(),
            w.index(),
            if w.is_sanity() { "sanity" } else { "unit" },
            join(w.factor().coeffs())
        ));
    }
    out.push_str("end\n");
    out
}

pub fn places_from_text(text: &str) -> Result<PlaceTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let level = split_header(&mut lines, "place-table")?;
    let mut groups: Vec<(u64, Vec<Place>)> = Vec::new();
    for line in lines {
        let line = line.trim();
        if line == "end" {
            return Ok(PlaceTable::from_groups(level, groups));
        }
        let body = line.strip_prefix("place ").ok_or_else(|| parse_err(format!("unexpected line {line:?}")))?;
        let (head, coeffs) = body.split_once(':').ok_or_else(|| parse_err("missing ':'"))?;
        let words: Vec<&str> = head.split_whitespace().collect();
        let [ell, index, flag] = words.as_slice() else {
            return Err(parse_err(format!("bad place line {line:?}")));
        };
        let ell: u64 = parse_num(ell)?;
        let index: usize = parse_num(index)?;
        let sanity = match *flag {
            "sanity" => true,
            "unit" => false,
            other => return Err(parse_err(format!("bad place flag {other:?}"))),
        };
        let coeffs: Vec<u64> = coeffs.split_whitespace().map(parse_num).collect::<Result<_>>()?;
        let place = place_from_factor(level, ell, index, FpPoly::new(ell, coeffs), sanity)?;
        match groups.iter_mut().find(|(l, _)| *l == ell) {
            Some((_, v)) => v.push(place),
            None => groups.push((ell, vec![place])),
        }
    }
    Err(parse_err("missing 'end'"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_round_trip() {
        let lat = RelationLattice::build(12).unwrap();
        let text = lattice_to_text(&lat);
        let back = lattice_from_text(&text).unwrap();
        assert_eq!(back.relations().len(), lat.relations().len());
        assert_eq!(back.group().invariants(), lat.group().invariants());
        assert_eq!(lattice_to_text(&back), text);
    }

    #[test]
    fn false_relation_rejected() {
        let text = "relation-lattice 1\nlevel 5\nrelation torsion : 1 0 0 0 0 0\nend\n";
        assert!(matches!(lattice_from_text(text), Err(Error::FalseRelation(_))));
    }

    #[test]
    fn place_round_trip() {
        let table = PlaceTable::with_extra_primes(12, &[5]).unwrap();
        let text = places_to_text(&table);
        let back = places_from_text(&text).unwrap();
        assert_eq!(places_to_text(&back), text);
        assert_eq!(back.len(), table.len());
        let bad = "place-table 1\nlevel 12\nplace 3 0 unit : 1 1\nend\n";
        assert!(places_from_text(bad).is_err());
    }
}
