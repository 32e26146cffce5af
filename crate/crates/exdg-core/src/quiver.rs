//! Quivers and paths.
//!
//! A path stores its arrows in application order (first applied first).
//! Displayed form is function order: `c*b*a` applies `a`, then `b`, then
//! `c`. Identity paths display as `e` followed by the vertex name.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    /// Validates that names are nonempty and unambiguous: vertex names and
    /// arrow names are distinct, and no arrow name collides with an
    /// identity token `e<vertex>`.
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Quiver, String> {
        if vertices.is_empty() {
            return Err("quiver needs at least one vertex".into());
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if v.is_empty() {
                return Err("empty vertex name".into());
            }
            if !seen.insert(v.clone()) {
                return Err(format!("duplicate vertex name {v:?}"));
            }
        }
        let idents: std::collections::HashSet<String> =
            vertices.iter().map(|v| format!("e{v}")).collect();
        let mut anames = std::collections::HashSet::new();
        for a in &arrows {
            if a.name.is_empty() {
                return Err("empty arrow name".into());
            }
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(format!("arrow {:?} references unknown vertex", a.name));
            }
            if !anames.insert(a.name.clone()) {
                return Err(format!("duplicate arrow name {:?}", a.name));
            }
            if seen.contains(&a.name) || idents.contains(&a.name) {
                return Err(format!("arrow name {:?} is ambiguous", a.name));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// The quiver with every arrow reversed (same names).
    pub fn reversed(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
                .collect(),
        }
    }

    /// All paths of length ≤ cap, in canonical order
    /// (length ascending, then arrow sequence lexicographic).
    pub fn paths_up_to(&self, cap: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.vertices.len())
            .map(|v| Path { arrows: Vec::new(), source: v, target: v })
            .collect();
        let mut frontier = out.clone();
        for _ in 0..cap {
            let mut next = Vec::new();
            for p in &frontier {
                for (i, a) in self.arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(i);
                        next.push(Path { arrows, source: p.source, target: a.target });
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
        out
    }
}

/// A directed path; `arrows` lists arrow indices in application order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub arrows: Vec<usize>,
    pub source: usize,
    pub target: usize,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn canonical_key(&self) -> (usize, Vec<usize>, usize) {
        (self.arrows.len(), self.arrows.clone(), self.source)
    }

    /// The reversed path (for the opposite algebra).
    pub fn reversed(&self) -> Path {
        Path {
            arrows: self.arrows.iter().rev().cloned().collect(),
            source: self.target,
            target: self.source,
        }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e{}", q.vertices[self.source])
        } else {
            self.arrows
                .iter()
                .rev()
                .map(|&i| q.arrows[i].name.clone())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}
