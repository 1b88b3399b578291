//! Reader for Gmsh MSH 2.2 ASCII files.
//!
//! Recognized sections: `$MeshFormat`, `$PhysicalNames` (skipped), `$Nodes`,
//! `$Elements`. Element type 1 (2-node line) becomes a tagged boundary edge,
//! type 2 (3-node triangle) becomes an interior cell; other element types are
//! skipped and counted as warnings.

use super::{BoundaryEdge, BoundaryTag, Mesh, MeshError};
use std::collections::{BTreeMap, HashMap};

/// Maps MSH physical tags to boundary tags.
///
/// Unless overridden, the convention is `1 = Inlet`, `2 = Outlet`,
/// `3 = Symmetry`, `10 + i = TubeWall(i)`.
#[derive(Debug, Clone, Default)]
pub struct TagMap {
    explicit: BTreeMap<i32, BoundaryTag>,
}

impl TagMap {
    pub fn with(mut self, physical: i32, tag: BoundaryTag) -> Self {
        self.explicit.insert(physical, tag);
        self
    }

    pub fn lookup(&self, physical: i32) -> Option<BoundaryTag> {
        if let Some(&t) = self.explicit.get(&physical) {
            return Some(t);
        }
        match physical {
            1 => Some(BoundaryTag::Inlet),
            2 => Some(BoundaryTag::Outlet),
            3 => Some(BoundaryTag::Symmetry),
            t if t >= 11 => Some(BoundaryTag::TubeWall((t - 10) as u32)),
            _ => None,
        }
    }

    /// Inverse mapping used by writers.
    pub fn physical_of(&self, tag: BoundaryTag) -> i32 {
        for (&p, &t) in &self.explicit {
            if t == tag {
                return p;
            }
        }
        match tag {
            BoundaryTag::Inlet => 1,
            BoundaryTag::Outlet => 2,
            BoundaryTag::Symmetry => 3,
            BoundaryTag::TubeWall(i) => 10 + i as i32,
        }
    }
}

struct Lines<'a> {
    inner: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> Lines<'a> {
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for line in self.inner.by_ref() {
            self.line_no += 1;
            let trimmed = line.trim();
            if !trimmed.is_empty() {
                return Some((self.line_no, trimmed));
            }
        }
        None
    }
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, MeshError> {
    tok.ok_or_else(|| MeshError::Parse { line, msg: format!("missing {what}") })?
        .parse::<T>()
        .map_err(|_| MeshError::Parse { line, msg: format!("invalid {what}") })
}

/// Parses MSH 2.2 ASCII text into a validated [`Mesh`].
///
/// Vertex indices are renumbered to contiguous 0-based values (file order)
/// and triangle orientation is corrected to counterclockwise. Returns the
/// mesh together with the number of skipped (unsupported) elements.
pub fn parse_msh(text: &str, tags: &TagMap) -> Result<(Mesh, usize), MeshError> {
    let mut lines = Lines { inner: text.lines(), line_no: 0 };

    let mut node_ids: Vec<i64> = Vec::new();
    let mut node_coords: Vec<[f64; 2]> = Vec::new();
    let mut id_to_index: HashMap<i64, usize> = HashMap::new();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let mut boundary_edges: Vec<BoundaryEdge> = Vec::new();
    let mut skipped = 0usize;
    let mut saw_format = false;
    let mut saw_nodes = false;

    while let Some((line_no, line)) = lines.next_content() {
        if !line.starts_with('$') {
            return Err(MeshError::Parse {
                line: line_no,
                msg: format!("expected a section header, found '{line}'"),
            });
        }
        let section = &line[1..];
        match section {
            "MeshFormat" => {
                let (ln, content) = lines
                    .next_content()
                    .ok_or(MeshError::Parse { line: line_no, msg: "truncated $MeshFormat".into() })?;
                let mut toks = content.split_whitespace();
                let version: String = parse_tok(toks.next(), ln, "version")?;
                let file_type: i32 = parse_tok(toks.next(), ln, "file type")?;
                if !version.starts_with("2.2") {
                    return Err(MeshError::Parse {
                        line: ln,
                        msg: format!("unsupported MSH version {version} (need 2.2)"),
                    });
                }
                if file_type != 0 {
                    return Err(MeshError::Parse { line: ln, msg: "binary MSH not supported".into() });
                }
                expect_end(&mut lines, "MeshFormat")?;
                saw_format = true;
            }
            "Nodes" => {
                let (ln, content) = lines
                    .next_content()
                    .ok_or(MeshError::Parse { line: line_no, msg: "truncated $Nodes".into() })?;
                let count: usize = parse_tok(content.split_whitespace().next(), ln, "node count")?;
                for _ in 0..count {
                    let (ln, content) = lines
                        .next_content()
                        .ok_or(MeshError::Parse { line: ln, msg: "truncated node list".into() })?;
                    let mut toks = content.split_whitespace();
                    let id: i64 = parse_tok(toks.next(), ln, "node id")?;
                    let x: f64 = parse_tok(toks.next(), ln, "node x")?;
                    let y: f64 = parse_tok(toks.next(), ln, "node y")?;
                    let _z: f64 = parse_tok(toks.next(), ln, "node z")?;
                    if id_to_index.insert(id, node_ids.len()).is_some() {
                        return Err(MeshError::Parse { line: ln, msg: format!("duplicate node id {id}") });
                    }
                    node_ids.push(id);
                    node_coords.push([x, y]);
                }
                expect_end(&mut lines, "Nodes")?;
                saw_nodes = true;
            }
            "Elements" => {
                if !saw_nodes {
                    return Err(MeshError::Parse {
                        line: line_no,
                        msg: "$Elements before $Nodes".into(),
                    });
                }
                let (ln, content) = lines
                    .next_content()
                    .ok_or(MeshError::Parse { line: line_no, msg: "truncated $Elements".into() })?;
                let count: usize = parse_tok(content.split_whitespace().next(), ln, "element count")?;
                for _ in 0..count {
                    let (ln, content) = lines
                        .next_content()
                        .ok_or(MeshError::Parse { line: ln, msg: "truncated element list".into() })?;
                    let mut toks = content.split_whitespace();
                    let _id: i64 = parse_tok(toks.next(), ln, "element id")?;
                    let etype: i32 = parse_tok(toks.next(), ln, "element type")?;
                    let ntags: usize = parse_tok(toks.next(), ln, "tag count")?;
                    let mut phys: Option<i32> = None;
                    for k in 0..ntags {
                        let t: i32 = parse_tok(toks.next(), ln, "tag")?;
                        if k == 0 {
                            phys = Some(t);
                        }
                    }
                    let mut node = |what: &str| -> Result<usize, MeshError> {
                        let id: i64 = parse_tok(toks.next(), ln, what)?;
                        id_to_index.get(&id).copied().ok_or(MeshError::Parse {
                            line: ln,
                            msg: format!("element references nonexistent node {id}"),
                        })
                    };
                    match etype {
                        1 => {
                            let a = node("line node")?;
                            let b = node("line node")?;
                            let phys = phys.ok_or(MeshError::Parse {
                                line: ln,
                                msg: "line element without a physical tag".into(),
                            })?;
                            let tag = tags
                                .lookup(phys)
                                .ok_or(MeshError::Tag { tag: phys, line: ln })?;
                            boundary_edges.push(BoundaryEdge { vertices: [a, b], tag });
                        }
                        2 => {
                            let tri = [node("triangle node")?, node("triangle node")?, node("triangle node")?];
                            triangles.push(tri);
                        }
                        _ => skipped += 1,
                    }
                }
                expect_end(&mut lines, "Elements")?;
            }
            other if other.starts_with("End") => {
                return Err(MeshError::Parse {
                    line: line_no,
                    msg: format!("unexpected ${other}"),
                });
            }
            other => {
                // Unknown section ($PhysicalNames and the like): skip to its end.
                let end = format!("$End{other}");
                loop {
                    match lines.next_content() {
                        Some((_, l)) if l == end => break,
                        Some(_) => {}
                        None => {
                            return Err(MeshError::Parse {
                                line: line_no,
                                msg: format!("section ${other} is not closed"),
                            })
                        }
                    }
                }
            }
        }
    }

    if !saw_format {
        return Err(MeshError::Parse { line: 1, msg: "missing $MeshFormat section".into() });
    }
    if triangles.is_empty() {
        return Err(MeshError::Parse { line: lines.line_no, msg: "no triangles in file".into() });
    }

    // Renumber to the contiguous set of nodes actually referenced, in file order.
    let mut used = vec![false; node_coords.len()];
    for t in &triangles {
        for &v in t {
            used[v] = true;
        }
    }
    for e in &boundary_edges {
        for &v in &e.vertices {
            used[v] = true;
        }
    }
    let mut remap = vec![usize::MAX; node_coords.len()];
    let mut vertices = Vec::new();
    for (i, &u) in used.iter().enumerate() {
        if u {
            remap[i] = vertices.len();
            vertices.push(node_coords[i]);
        }
    }
    for t in &mut triangles {
        for v in t.iter_mut() {
            *v = remap[*v];
        }
    }
    for e in &mut boundary_edges {
        for v in e.vertices.iter_mut() {
            *v = remap[*v];
        }
    }

    let mut mesh = Mesh {
        vertices,
        triangles,
        boundary_edges,
        tube_circles: BTreeMap::new(),
    };
    mesh.orient_ccw();
    mesh.fit_tube_circles()?;

    let report = super::validate(&mesh);
    if !report.is_ok() {
        let topological = report.failures.iter().any(|f| {
            f.contains("belongs to") || f.contains("degree") || f.contains("shared by")
                || f.contains("untagged") || f.contains("not an edge")
        });
        return Err(if topological {
            MeshError::Topology(report.failures.join("; "))
        } else {
            MeshError::Invalid(report.failures)
        });
    }
    Ok((mesh, skipped))
}

fn expect_end(lines: &mut Lines, section: &str) -> Result<(), MeshError> {
    let want = format!("$End{section}");
    match lines.next_content() {
        Some((_, l)) if l == want => Ok(()),
        Some((ln, l)) => Err(MeshError::Parse {
            line: ln,
            msg: format!("expected {want}, found '{l}'"),
        }),
        None => Err(MeshError::Parse { line: 0, msg: format!("missing {want}") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "\
$MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
6
1 1 2 1 1 1 2
2 1 2 2 2 2 3
3 1 2 3 3 3 4
4 1 2 3 4 4 1
5 2 2 0 0 1 2 3
6 2 2 0 0 1 3 4
$EndElements
";

    #[test]
    fn parses_two_triangle_square() {
        let (mesh, skipped) = parse_msh(SQUARE, &TagMap::default()).unwrap();
        assert_eq!(skipped, 0);
        assert_eq!(mesh.n_vertices(), 4);
        assert_eq!(mesh.n_triangles(), 2);
        assert_eq!(mesh.boundary_edges.len(), 4);
        assert_eq!(mesh.boundary_edges[0].tag, BoundaryTag::Inlet);
        assert_eq!(mesh.boundary_edges[1].tag, BoundaryTag::Outlet);
        assert_eq!(mesh.boundary_edges[2].tag, BoundaryTag::Symmetry);
    }

    #[test]
    fn fixes_clockwise_triangle() {
        let text = SQUARE.replace("5 2 2 0 0 1 2 3", "5 2 2 0 0 1 3 2");
        let (mesh, _) = parse_msh(&text, &TagMap::default()).unwrap();
        for t in 0..mesh.n_triangles() {
            assert!(mesh.area2(t) > 0.0);
        }
    }

    #[test]
    fn reports_missing_node_with_line_number() {
        let text = SQUARE.replace("1 1 2 1 1 1 2", "1 1 2 1 1 1 99");
        let err = parse_msh(&text, &TagMap::default()).unwrap_err();
        match err {
            MeshError::Parse { line, msg } => {
                assert_eq!(line, 13);
                assert!(msg.contains("99"), "{msg}");
            }
            other => panic!("expected ParseError, got {other:?}"),
        }
    }

    #[test]
    fn unknown_physical_tag_is_a_tag_error() {
        let text = SQUARE.replace("1 1 2 1 1 1 2", "1 1 2 7 7 1 2");
        match parse_msh(&text, &TagMap::default()).unwrap_err() {
            MeshError::Tag { tag: 7, .. } => {}
            other => panic!("expected TagError, got {other:?}"),
        }
    }

    #[test]
    fn tagged_interior_edge_is_non_manifold() {
        // Tag the diagonal (1,3): it belongs to two triangles.
        let text = SQUARE
            .replace("$Elements\n6", "$Elements\n7")
            .replace("$EndElements", "7 1 2 3 3 1 3\n$EndElements");
        match parse_msh(&text, &TagMap::default()).unwrap_err() {
            MeshError::Topology(_) => {}
            other => panic!("expected TopologyError, got {other:?}"),
        }
    }

    #[test]
    fn custom_tag_map_overrides_default() {
        let tags = TagMap::default().with(1, BoundaryTag::Symmetry);
        let (mesh, _) = parse_msh(SQUARE, &tags).unwrap();
        assert_eq!(mesh.boundary_edges[0].tag, BoundaryTag::Symmetry);
    }
}
