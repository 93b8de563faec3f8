//! Text format for presentations and operator matrices.
//!
//! ```text
//! presentation 1
//! level 5
//! rank 3
//! cusps C0
//! cusp 0 : 0 1 : 1 0 c0 inf
//! boundary : -1 1 0 0
//! subspace : 1 0 0
//! end
//! ```
//!
//! A `cusp` line holds the class index, its key, a representative `p q` and
//! the flags `c0`, `zero`, `inf`. There is one `boundary` line per basis
//! vector of the relative homology and one `subspace` line per basis vector
//! of the selected cusp subspace. An operator matrix is stored as
//!
//! ```text
//! operator 1
//! level 11
//! name U11
//! size 12 12
//! row : ...
//! end
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::cusps::Cusp;
use super::homology::HomologyPresentation;
use crate::error::{Error, Result};
use crate::linalg::{Int, IntMatrix};

/// Which cusps the relative homology is taken with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CuspSelector {
    All,
    C0,
    Cinf,
    None,
}

impl CuspSelector {
    pub fn support(&self, pres: &HomologyPresentation) -> Vec<usize> {
        let cusps = pres.cusps();
        match self {
            CuspSelector::All => (0..cusps.len()).collect(),
            CuspSelector::C0 => cusps.c0_upper(),
            CuspSelector::Cinf => cusps.orbit_of_infinity(),
            CuspSelector::None => Vec::new(),
        }
    }
}

impl fmt::Display for CuspSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CuspSelector::All => "all",
            CuspSelector::C0 => "C0",
            CuspSelector::Cinf => "Cinf",
            CuspSelector::None => "none",
        })
    }
}

impl FromStr for CuspSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(CuspSelector::All),
            "C0" | "c0" => Ok(CuspSelector::C0),
            "Cinf" | "cinf" => Ok(CuspSelector::Cinf),
            "none" => Ok(CuspSelector::None),
            _ => Err(Error::InvalidCuspSubset(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspRecord {
    pub key: (u64, u64),
    pub rep: Cusp,
    pub c0: bool,
    pub zero: bool,
    pub infinity: bool,
}

/// The data of a presentation that is worth keeping on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationRecord {
    pub level: u64,
    pub rank: usize,
    pub selector: CuspSelector,
    pub cusps: Vec<CuspRecord>,
    pub boundary: IntMatrix,
    pub subspace: IntMatrix,
}

impl PresentationRecord {
    pub fn new(pres: &HomologyPresentation, selector: CuspSelector) -> Result<Self> {
        let cusps = pres
            .cusps()
            .classes()
            .iter()
            .map(|c| CuspRecord {
                key: c.key,
                rep: c.rep,
                c0: c.in_c0_upper,
                zero: c.in_orbit_of_zero,
                infinity: c.in_orbit_of_infinity,
            })
            .collect();
        let sub = pres.subspace(&selector.support(pres))?;
        Ok(PresentationRecord {
            level: pres.level(),
            rank: pres.rank(),
            selector,
            cusps,
            boundary: pres.boundary_matrix().clone(),
            subspace: sub.lattice().basis().clone(),
        })
    }

    /// Whether the record describes `pres`.
    pub fn matches(&self, pres: &HomologyPresentation) -> bool {
        PresentationRecord::new(pres, self.selector).map(|r| &r == self).unwrap_or(false)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "presentation 1\nlevel {}\nrank {}\ncusps {}\n",
            self.level, self.rank, self.selector
        );
        for (i, c) in self.cusps.iter().enumerate() {
            let mut flags = Vec::new();
            if c.c0 {
                flags.push("c0");
            }
            if c.zero {
                flags.push("zero");
            }
            if c.infinity {
                flags.push("inf");
            }
            out.push_str(&format!(
                "cusp {i} : {} {} : {} {} {}\n",
                c.key.0,
                c.key.1,
                c.rep.p,
                c.rep.q,
                flags.join(" ")
            ));
        }
        for r in self.boundary.rows_iter() {
            out.push_str(&format!("boundary : {}\n", join(r)));
        }
        for r in self.subspace.rows_iter() {
            out.push_str(&format!("subspace : {}\n", join(r)));
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        expect(lines.next(), "presentation 1")?;
        let level: u64 = parse_num(field(lines.next(), "level")?)?;
        let rank: usize = parse_num(field(lines.next(), "rank")?)?;
        let selector: CuspSelector = field(lines.next(), "cusps")?.parse()?;
        let mut cusps = Vec::new();
        let mut boundary = Vec::new();
        let mut subspace = Vec::new();
        for line in lines {
            if line == "end" {
                let nc = cusps.len();
                if boundary.len() != rank || boundary.iter().any(|r: &Vec<Int>| r.len() != nc) {
                    return Err(parse_err("boundary matrix has the wrong shape"));
                }
                if subspace.iter().any(|r: &Vec<Int>| r.len() != rank) {
                    return Err(parse_err("subspace basis has the wrong length"));
                }
                return Ok(PresentationRecord {
                    level,
                    rank,
                    selector,
                    cusps,
                    boundary: IntMatrix::from_rows(nc, &boundary),
                    subspace: IntMatrix::from_rows(rank, &subspace),
                });
            }
            if let Some(body) = line.strip_prefix("cusp ") {
                let parts: Vec<&str> = body.split(':').map(str::trim).collect();
                let [idx, key, rest] = parts.as_slice() else {
                    return Err(parse_err(format!("bad cusp line {line:?}")));
                };
                if parse_num::<usize>(idx)? != cusps.len() {
                    return Err(parse_err("cusp lines out of order"));
                }
                let key: Vec<u64> = key.split_whitespace().map(parse_num).collect::<Result<_>>()?;
                let words: Vec<&str> = rest.split_whitespace().collect();
                if key.len() != 2 || words.len() < 2 {
                    return Err(parse_err(format!("bad cusp line {line:?}")));
                }
                let flags = &words[2..];
                if let Some(f) = flags.iter().find(|f| !["c0", "zero", "inf"].contains(f)) {
                    return Err(parse_err(format!("unknown cusp flag {f:?}")));
                }
                cusps.push(CuspRecord {
                    key: (key[0], key[1]),
                    rep: Cusp { p: parse_num(words[0])?, q: parse_num(words[1])? },
                    c0: flags.contains(&"c0"),
                    zero: flags.contains(&"zero"),
                    infinity: flags.contains(&"inf"),
                });
            } else if let Some(body) = line.strip_prefix("boundary :") {
                boundary.push(parse_row(body)?);
            } else if let Some(body) = line.strip_prefix("subspace :") {
                subspace.push(parse_row(body)?);
            } else {
                return Err(parse_err(format!("unexpected line {line:?}")));
            }
        }
        Err(parse_err("missing 'end'"))
    }
}

pub fn operator_to_text(level: u64, name: &str, m: &IntMatrix) -> String {
    let mut out = format!("operator 1\nlevel {level}\nname {name}\nsize {} {}\n", m.nrows(), m.ncols());
    for r in m.rows_iter() {
        out.push_str(&format!("row : {}\n", join(r)));
    }
    out.push_str("end\n");
    out
}

/// Returns `(level, name, matrix)`.
pub fn operator_from_text(text: &str) -> Result<(u64, String, IntMatrix)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    expect(lines.next(), "operator 1")?;
    let level: u64 = parse_num(field(lines.next(), "level")?)?;
    let name = field(lines.next(), "name")?.to_string();
    let size: Vec<usize> = field(lines.next(), "size")?.split_whitespace().map(parse_num).collect::<Result<_>>()?;
    let [nrows, ncols] = size.as_slice() else {
        return Err(parse_err("bad size line"));
    };
    let mut rows = Vec::new();
    for line in lines {
        if line == "end" {
            if rows.len() != *nrows || rows.iter().any(|r: &Vec<Int>| r.len() != *ncols) {
                return Err(parse_err("matrix has the wrong shape"));
            }
            return Ok((level, name, IntMatrix::from_rows(*ncols, &rows)));
        }
        let body = line.strip_prefix("row :").ok_or_else(|| parse_err(format!("unexpected line {line:?}")))?;
        rows.push(parse_row(body)?);
    }
    Err(parse_err("missing 'end'"))
}

fn join(v: &[Int]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| parse_err(format!("bad integer {s:?}")))
}

fn parse_row(s: &str) -> Result<Vec<Int>> {
    s.split_whitespace().map(parse_num).collect()
}

fn expect(line: Option<&str>, want: &str) -> Result<()> {
    match line {
        Some(l) if l == want => Ok(()),
        _ => Err(parse_err(format!("expected '{want}'"))),
    }
}

fn field<'a>(line: Option<&'a str>, name: &str) -> Result<&'a str> {
    line.and_then(|l| l.strip_prefix(name))
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| parse_err(format!("missing '{name}' line")))
}
