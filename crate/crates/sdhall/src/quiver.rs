//! Quiver descriptions and their JSON on-disk format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finfield::check_prime;

/// A finite quiver with vertices `0..vertices` and a list of arrows
/// `(source, target)`.  Acyclicity is required so that the path algebra is
/// finite-dimensional and the representation category is hereditary with
/// finitely many objects per dimension vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub vertices: usize,
    #[serde(default)]
    pub arrows: Vec<(usize, usize)>,
}

/// On-disk description: the quiver plus the field size.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuiverFile {
    pub vertices: usize,
    #[serde(default)]
    pub arrows: Vec<(usize, usize)>,
    pub q: u32,
}

impl QuiverSpec {
    /// The quiver with `n` vertices and no arrows; its representations are
    /// tuples of plain vector spaces.
    pub fn discrete(n: usize) -> QuiverSpec {
        QuiverSpec { vertices: n, arrows: Vec::new() }
    }

    /// The `A_2` quiver `0 -> 1`.
    pub fn a2() -> QuiverSpec {
        QuiverSpec { vertices: 2, arrows: vec![(0, 1)] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices == 0 {
            return Err(Error::Config("quiver needs at least one vertex".into()));
        }
        for &(s, t) in &self.arrows {
            if s >= self.vertices || t >= self.vertices {
                return Err(Error::Config(format!(
                    "arrow ({s},{t}) out of range for {} vertices",
                    self.vertices
                )));
            }
        }
        if !self.is_acyclic() {
            return Err(Error::Config("quiver must be acyclic".into()));
        }
        Ok(())
    }

    fn is_acyclic(&self) -> bool {
        // Kahn's algorithm; loops (s == t) count as cycles.
        let mut indeg = vec![0usize; self.vertices];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut queue: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        queue.push(t);
                    }
                }
            }
        }
        seen == self.vertices
    }
}

impl QuiverFile {
    pub fn parse(text: &str) -> Result<(QuiverSpec, u32)> {
        let file: QuiverFile = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("bad quiver file: {e}")))?;
        let spec = QuiverSpec { vertices: file.vertices, arrows: file.arrows };
        spec.validate()?;
        check_prime(file.q)?;
        Ok((spec, file.q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let (spec, q) = QuiverFile::parse(r#"{"vertices":2,"arrows":[[0,1]],"q":3}"#).unwrap();
        assert_eq!(spec, QuiverSpec::a2());
        assert_eq!(q, 3);
        assert!(QuiverFile::parse(r#"{"vertices":1,"arrows":[[0,0]],"q":2}"#).is_err());
        assert!(QuiverFile::parse(r#"{"vertices":2,"arrows":[[0,1],[1,0]],"q":2}"#).is_err());
        assert!(QuiverFile::parse(r#"{"vertices":2,"arrows":[[0,2]],"q":2}"#).is_err());
        assert!(QuiverFile::parse(r#"{"vertices":2,"arrows":[],"q":6}"#).is_err());
    }
}
