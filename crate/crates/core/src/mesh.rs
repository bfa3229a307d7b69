//! Full-level triangulations `T_n` with shared vertices.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::kernel::{midpoint, Point};
use crate::space::Geometry;
use crate::subdivision::{child_roles, ChildIndex, LabeledTriangle, NestedPath};

/// Depth allowed by [`subdivide_to`] unless overridden.
pub const DEFAULT_MAX_DEPTH: usize = 10;
/// Environment variable overriding [`DEFAULT_MAX_DEPTH`].
pub const MAX_DEPTH_ENV: &str = "MEDIAL_SUBDIV_MAX_DEPTH";

/// The memory guard in effect: the environment override or the default.
pub fn max_depth() -> usize {
    std::env::var(MAX_DEPTH_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DEPTH)
}

/// One refinement level: an indexed triangle mesh with per-face path labels.
///
/// Faces list vertex indices in role order `(A, B, C)`. The children of face
/// `i` are faces `4i..4i+4` of the next level, in [`ChildIndex`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangulationLevel {
    geometry: Geometry,
    depth: usize,
    vertices: Vec<Point>,
    faces: Vec<[u32; 3]>,
    /// Path from the root, two bits per step, last step in the low bits.
    labels: Vec<u64>,
}

impl TriangulationLevel {
    pub fn root(t: &LabeledTriangle) -> Self {
        TriangulationLevel {
            geometry: t.geometry(),
            depth: 0,
            vertices: t.vertices().to_vec(),
            faces: vec![[0, 1, 2]],
            labels: vec![0],
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face_vertices(&self, i: usize) -> [Point; 3] {
        self.faces[i].map(|v| self.vertices[v as usize])
    }

    pub fn triangle(&self, i: usize) -> LabeledTriangle {
        LabeledTriangle::from_vertices(self.face_vertices(i))
    }

    pub fn triangles(&self) -> Vec<LabeledTriangle> {
        (0..self.len()).into_par_iter().map(|i| self.triangle(i)).collect()
    }

    pub fn path(&self, i: usize) -> NestedPath {
        let code = self.labels[i];
        let steps = (0..self.depth)
            .rev()
            .map(|k| ChildIndex::from_index(((code >> (2 * k)) & 3) as usize).expect("two-bit code"))
            .collect();
        NestedPath::new(steps)
    }

    /// Number of faces using each undirected edge.
    pub fn edge_incidence(&self) -> HashMap<(u32, u32), usize> {
        let mut count = HashMap::new();
        for f in &self.faces {
            for (p, q) in [(f[1], f[2]), (f[2], f[0]), (f[0], f[1])] {
                *count.entry((p.min(q), p.max(q))).or_insert(0) += 1;
            }
        }
        count
    }

    pub fn to_json(&self) -> TriangulationJson {
        TriangulationJson {
            space: self.geometry,
            depth: self.depth,
            vertices: self.vertices.iter().map(Point::to_vec).collect(),
            triangles: self.faces.clone(),
            labels: (0..self.len()).map(|i| self.path(i).to_string()).collect(),
        }
    }

    pub fn from_json(j: &TriangulationJson) -> Result<Self> {
        let vertices = j
            .vertices
            .iter()
            .map(|c| Point::from_slice(j.space, c))
            .collect::<Result<Vec<_>>>()?;
        let n = vertices.len() as u32;
        if j.triangles.iter().flatten().any(|&v| v >= n) {
            return Err(Error::ConfigError("triangle references a missing vertex".into()));
        }
        let labels = if j.labels.is_empty() {
            vec![0; j.triangles.len()]
        } else {
            if j.labels.len() != j.triangles.len() {
                return Err(Error::ConfigError("one label per triangle expected".into()));
            }
            j.labels
                .iter()
                .map(|l| {
                    let p: NestedPath = l.parse()?;
                    Ok(p.steps.iter().fold(0u64, |acc, s| (acc << 2) | s.index() as u64))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(TriangulationLevel { geometry: j.space, depth: j.depth, vertices, faces: j.triangles.clone(), labels })
    }
}

/// Serialized form of a [`TriangulationLevel`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub space: Geometry,
    pub depth: usize,
    pub vertices: Vec<Vec<f64>>,
    pub triangles: Vec<[u32; 3]>,
    #[serde(default)]
    pub labels: Vec<String>,
}

/// The next level. Each edge midpoint is computed once and shared by the
/// faces on both sides, so neighbouring children agree bitwise.
pub fn subdivide_level(level: &TriangulationLevel) -> Result<TriangulationLevel> {
    if level.depth >= 31 {
        return Err(Error::DepthLimit { requested: level.depth + 1, limit: 31 });
    }
    let base = level.vertices.len() as u32;
    let mut edge_index: HashMap<(u32, u32), u32> = HashMap::with_capacity(level.faces.len() * 2);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut face_mids: Vec<[u32; 3]> = Vec::with_capacity(level.faces.len());
    for f in &level.faces {
        let mut mids = [0u32; 3];
        for (slot, (p, q)) in mids.iter_mut().zip([(f[1], f[2]), (f[2], f[0]), (f[0], f[1])]) {
            let key = (p.min(q), p.max(q));
            *slot = *edge_index.entry(key).or_insert_with(|| {
                edges.push(key);
                base + edges.len() as u32 - 1
            });
        }
        face_mids.push(mids);
    }
    let new_points = edges
        .par_iter()
        .map(|&(p, q)| midpoint(&level.vertices[p as usize], &level.vertices[q as usize]))
        .collect::<Result<Vec<_>>>()?;
    let mut vertices = level.vertices.clone();
    vertices.extend(new_points);

    let mut faces = Vec::with_capacity(level.faces.len() * 4);
    let mut labels = Vec::with_capacity(level.faces.len() * 4);
    for ((f, m), &code) in level.faces.iter().zip(&face_mids).zip(&level.labels) {
        for child in ChildIndex::ALL {
            faces.push(child_roles(f, *m, child));
            labels.push((code << 2) | child.index() as u64);
        }
    }
    Ok(TriangulationLevel { geometry: level.geometry, depth: level.depth + 1, vertices, faces, labels })
}

/// `T_depth` of `t0`, refusing depths above the memory guard.
pub fn subdivide_to(t0: &LabeledTriangle, depth: usize) -> Result<TriangulationLevel> {
    subdivide_to_with_limit(t0, depth, max_depth())
}

pub fn subdivide_to_with_limit(t0: &LabeledTriangle, depth: usize, limit: usize) -> Result<TriangulationLevel> {
    if depth > limit {
        return Err(Error::DepthLimit { requested: depth, limit });
    }
    let mut level = TriangulationLevel::root(t0);
    for _ in 0..depth {
        level = subdivide_level(&level)?;
    }
    Ok(level)
}
