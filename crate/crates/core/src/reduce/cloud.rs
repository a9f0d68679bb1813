use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CloudKind {
    Vertex,
    Variable,
    Clause,
    Item,
}

impl fmt::Display for CloudKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CloudKind::Vertex => "vertex",
            CloudKind::Variable => "variable",
            CloudKind::Clause => "clause",
            CloudKind::Item => "item",
        })
    }
}

impl FromStr for CloudKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(CloudKind::Vertex),
            "variable" => Ok(CloudKind::Variable),
            "clause" => Ok(CloudKind::Clause),
            "item" => Ok(CloudKind::Item),
            other => Err(Error::param(format!("unknown cloud kind {other:?}"))),
        }
    }
}

/// Original element -> the produced elements standing in for it. Clouds are
/// pairwise disjoint; all indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloudMap {
    kind: CloudKind,
    produced_count: usize,
    forward: Vec<Vec<usize>>,
}

impl CloudMap {
    pub fn new(kind: CloudKind, produced_count: usize, forward: Vec<Vec<usize>>) -> Result<Self> {
        let mut owner = vec![false; produced_count + 1];
        for (i, cloud) in forward.iter().enumerate() {
            for &x in cloud {
                if x == 0 || x > produced_count {
                    return Err(Error::invalid(format!(
                        "cloud {} names element {x} outside 1..={produced_count}",
                        i + 1
                    )));
                }
                if owner[x] {
                    return Err(Error::invalid(format!("element {x} belongs to two clouds")));
                }
                owner[x] = true;
            }
        }
        Ok(CloudMap {
            kind,
            produced_count,
            forward,
        })
    }

    /// Contiguous clouds of equal size: original `i` owns
    /// `(i-1)*size+1 ..= i*size`, shifted by `offset`.
    pub(crate) fn contiguous(kind: CloudKind, originals: usize, size: usize, offset: usize) -> Self {
        CloudMap {
            kind,
            produced_count: offset + originals * size,
            forward: (0..originals)
                .map(|i| (offset + i * size + 1..=offset + (i + 1) * size).collect())
                .collect(),
        }
    }

    pub fn kind(&self) -> CloudKind {
        self.kind
    }

    pub fn original_count(&self) -> usize {
        self.forward.len()
    }

    pub fn produced_count(&self) -> usize {
        self.produced_count
    }

    /// Cloud of original element `i` (1-based).
    pub fn cloud(&self, i: usize) -> &[usize] {
        &self.forward[i - 1]
    }

    pub fn clouds(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.forward.iter().enumerate().map(|(i, c)| (i + 1, c.as_slice()))
    }

    /// Produced element -> owning original, 0 where unowned (index 0 unused).
    pub fn owners(&self) -> Vec<usize> {
        let mut owner = vec![0; self.produced_count + 1];
        for (i, cloud) in self.clouds() {
            for &x in cloud {
                owner[x] = i;
            }
        }
        owner
    }

    /// `p cloudmap <kind> <originals> <produced>` then
    /// `<original-id> : <produced-id> ...` per original.
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = format!(
            "p cloudmap {} {} {}\n",
            self.kind,
            self.forward.len(),
            self.produced_count
        );
        for (i, cloud) in self.clouds() {
            let _ = write!(out, "{i} :");
            for x in cloud {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with("c "));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "empty cloud map"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "p" || toks[1] != "cloudmap" {
            return Err(Error::parse(hl, "expected `p cloudmap <kind> <originals> <produced>`"));
        }
        let kind: CloudKind = toks[2].parse().map_err(|_| Error::parse(hl, "unknown cloud kind"))?;
        let originals: usize = toks[3].parse().map_err(|_| Error::parse(hl, "invalid count"))?;
        let produced: usize = toks[4].parse().map_err(|_| Error::parse(hl, "invalid count"))?;
        let mut forward = Vec::with_capacity(originals);
        for (ln, line) in lines {
            let (head, tail) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln, "expected `<original> : <produced> ...`"))?;
            let id: usize = head
                .trim()
                .parse()
                .map_err(|_| Error::parse(ln, "invalid original id"))?;
            if id != forward.len() + 1 {
                return Err(Error::parse(
                    ln,
                    format!("expected original {}, got {id}", forward.len() + 1),
                ));
            }
            let cloud = tail
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::parse(ln, format!("invalid element {t:?}")))
                })
                .collect::<Result<Vec<usize>>>()?;
            forward.push(cloud);
        }
        if forward.len() != originals {
            return Err(Error::parse(
                hl,
                format!("header declares {originals} clouds, found {}", forward.len()),
            ));
        }
        CloudMap::new(kind, produced, forward).map_err(|e| Error::parse(hl, e.to_string()))
    }
}

/// A produced instance together with the correspondence needed to decode.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionOutput<T> {
    pub instance: T,
    pub clouds: CloudMap,
    /// Blowup factor used.
    pub r: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contiguous_layout() {
        let m = CloudMap::contiguous(CloudKind::Vertex, 3, 2, 0);
        assert_eq!(m.cloud(2), &[3, 4]);
        assert_eq!(m.owners(), vec![0, 1, 1, 2, 2, 3, 3]);
        let shifted = CloudMap::contiguous(CloudKind::Vertex, 2, 3, 2);
        assert_eq!(shifted.cloud(1), &[3, 4, 5]);
        assert_eq!(shifted.produced_count(), 8);
    }

    #[test]
    fn overlapping_clouds_rejected() {
        assert!(CloudMap::new(CloudKind::Vertex, 3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(CloudMap::new(CloudKind::Vertex, 3, vec![vec![4]]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = CloudMap::contiguous(CloudKind::Variable, 3, 2, 0);
        let text = m.to_text();
        assert!(text.contains("2 : 3 4\n"));
        assert_eq!(CloudMap::from_text(&text).unwrap(), m);
        assert!(CloudMap::from_text("p cloudmap vertex 2 2\n1 : 1\n").is_err());
    }
}
