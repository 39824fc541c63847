use std::fmt;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

use super::SingularityType;

const SHIPPED: &str = include_str!("../../data/brauer_table.txt");

/// A finite abelian group by invariant factors, each dividing the next.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    factors: Vec<u64>,
}

impl GroupDescriptor {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        let factors: Vec<u64> = factors.into_iter().filter(|&f| f != 1).collect();
        if factors.contains(&0) {
            return Err(Error::Domain("invariant factors must be positive".into()));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Domain(format!("{factors:?} are not invariant factors")));
        }
        Ok(GroupDescriptor { factors })
    }

    pub fn trivial() -> Self {
        GroupDescriptor::default()
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    fn parse(s: &str) -> Result<Self> {
        let factors = s
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad group '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        GroupDescriptor::new(factors)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.factors.len() {
            let n = self.factors[i];
            let run = self.factors[i..].iter().take_while(|&&x| x == n).count();
            parts.push(if run == 1 { format!("Z/{n}") } else { format!("(Z/{n})^{run}") });
            i += run;
        }
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerTableRow {
    pub degree: u32,
    /// `None` for the wildcard row of a degree.
    pub label: Option<String>,
    pub br_bar: GroupDescriptor,
    pub h1: GroupDescriptor,
    pub br_nr: Option<GroupDescriptor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableResult {
    pub degree: u32,
    pub label: String,
    pub br_bar: GroupDescriptor,
    pub h1: GroupDescriptor,
    /// `None` when the extension is not resolved by the table.
    pub br_nr: Option<GroupDescriptor>,
    pub wildcard: bool,
}

#[derive(Clone, Debug)]
pub struct BrauerTable {
    rows: Vec<BrauerTableRow>,
}

impl BrauerTable {
    /// Rows `degree | type | br_bar | h1 | br_nr-or-?`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::Parse(format!("table line {}: {m}", lineno + 1));
            let cols: Vec<&str> = line.split('|').map(str::trim).collect();
            if cols.len() != 5 {
                return Err(bad("expected 5 columns"));
            }
            let degree = cols[0].parse().map_err(|_| bad("bad degree"))?;
            let label = match cols[1] {
                "*" => None,
                l => Some(SingularityType::from_label(l)?.label()),
            };
            let br_nr = match cols[4] {
                "?" => None,
                g => Some(GroupDescriptor::parse(g)?),
            };
            rows.push(BrauerTableRow {
                degree,
                label,
                br_bar: GroupDescriptor::parse(cols[2])?,
                h1: GroupDescriptor::parse(cols[3])?,
                br_nr,
            });
        }
        Ok(BrauerTable { rows })
    }

    pub fn shipped() -> &'static BrauerTable {
        static TABLE: Lazy<BrauerTable> = Lazy::new(|| BrauerTable::parse(SHIPPED).expect("shipped table parses"));
        &TABLE
    }

    pub fn rows(&self) -> &[BrauerTableRow] {
        &self.rows
    }

    pub fn lookup(&self, degree: u32, ty: &SingularityType) -> Result<TableResult> {
        let label = ty.label();
        let exact = self.rows.iter().find(|r| r.degree == degree && r.label.as_deref() == Some(label.as_str()));
        let row = exact
            .or_else(|| self.rows.iter().find(|r| r.degree == degree && r.label.is_none()))
            .ok_or_else(|| Error::TableMiss { degree, label: if label.is_empty() { "smooth".into() } else { label.clone() } })?;
        Ok(TableResult {
            degree,
            label,
            br_bar: row.br_bar.clone(),
            h1: row.h1.clone(),
            br_nr: row.br_nr.clone(),
            wildcard: exact.is_none(),
        })
    }
}

/// Looks up the shipped table.
pub fn brauer_table(degree: u32, ty: &SingularityType) -> Result<TableResult> {
    BrauerTable::shipped().lookup(degree, ty)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn look(d: u32, l: &str) -> Result<TableResult> {
        brauer_table(d, &SingularityType::from_label(l).unwrap())
    }

    #[test]
    fn stated_rows() {
        assert_eq!(look(4, "2A1+A3").unwrap().br_nr.unwrap().to_string(), "(Z/2)^2");
        assert_eq!(look(4, "A3+2A1").unwrap().br_nr.unwrap().factors(), &[2, 2]);
        assert_eq!(look(3, "3A2").unwrap().br_nr.unwrap().to_string(), "(Z/3)^2");
        let r = look(1, "2A4").unwrap();
        assert_eq!((r.br_bar.to_string(), r.h1.to_string()), ("Z/5".into(), "Z/5".into()));
        assert_eq!(r.br_nr.unwrap().to_string(), "(Z/5)^2");
        let t = look(4, "A1").unwrap();
        assert!(t.wildcard && t.br_nr.unwrap().is_trivial());
    }

    #[test]
    fn misses_are_reported() {
        assert!(matches!(look(1, "A1"), Err(Error::TableMiss { degree: 1, .. })));
        assert!(matches!(look(2, "2A4"), Err(Error::TableMiss { .. })));
    }

    #[test]
    fn groups() {
        assert!(GroupDescriptor::new(vec![2, 3]).is_err());
        assert_eq!(GroupDescriptor::new(vec![2, 4]).unwrap().to_string(), "Z/2 x Z/4");
        assert_eq!(GroupDescriptor::trivial().to_string(), "0");
    }
}
