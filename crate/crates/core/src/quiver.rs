//! Quivers with relations, dimension vectors, `K_0` classes and Euler forms.
//!
//! Paths are written left to right: the path `a b` means "first `a`, then
//! `b`", so `t(a) = s(b)`. On a representation the path `a b` acts by the
//! matrix product `φ_b · φ_a`.
//!
//! Vertices and arrows are indexed by declaration order, which is also the
//! order used for every vector and for serialization.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{CoreError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A linear combination of paths of length at least two, all sharing a
/// source and a target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// `(coefficient, path)`; paths hold arrow indices.
    pub terms: Vec<(i64, Vec<usize>)>,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    name: Option<String>,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<Relation>,
    topo: Option<Vec<usize>>,
}

impl PartialEq for Quiver {
    /// Structural equality; the display name is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.arrows == other.arrows
            && self.relations == other.relations
    }
}

impl Eq for Quiver {}

fn valid_id(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ':' | '*' | '+' | '-' | '#' | '>'))
}

/// Relation terms as `(coefficient, arrow names)` before arrow lookup.
type RawRelation = Vec<(i64, Vec<String>)>;

impl Quiver {
    /// Builds a quiver from vertex ids, `(arrow id, source id, target id)`
    /// triples and relations over those arrows.
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<(String, String, String)>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        let mut vindex = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if !valid_id(v) {
                return Err(CoreError::InvalidInput(format!("invalid vertex id '{v}'")));
            }
            if vindex.insert(v.clone(), i).is_some() {
                return Err(CoreError::InvalidInput(format!("duplicate vertex '{v}'")));
            }
        }
        let mut seen = HashMap::new();
        let mut built = Vec::with_capacity(arrows.len());
        for (id, s, t) in arrows {
            if !valid_id(&id) {
                return Err(CoreError::InvalidInput(format!("invalid arrow id '{id}'")));
            }
            if seen.insert(id.clone(), ()).is_some() {
                return Err(CoreError::InvalidInput(format!("duplicate arrow '{id}'")));
            }
            let source = *vindex
                .get(&s)
                .ok_or_else(|| CoreError::InvalidInput(format!("undeclared vertex '{s}'")))?;
            let target = *vindex
                .get(&t)
                .ok_or_else(|| CoreError::InvalidInput(format!("undeclared vertex '{t}'")))?;
            built.push(Arrow { id, source, target });
        }
        let mut q = Quiver {
            name: None,
            vertices,
            arrows: built,
            relations: Vec::new(),
            topo: None,
        };
        for r in &relations {
            q.validate_relation(r).map_err(CoreError::InvalidInput)?;
        }
        q.relations = relations;
        q.topo = q.compute_topological_order();
        Ok(q)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topo.is_some()
    }

    /// A topological order of the vertices, present iff the quiver is acyclic.
    pub fn topological_order(&self) -> Option<&[usize]> {
        self.topo.as_deref()
    }

    /// Acyclic and relation-free, i.e. a finite-dimensional hereditary path
    /// algebra.
    pub fn is_path_algebra(&self) -> bool {
        self.is_acyclic() && self.relations.is_empty()
    }

    pub(crate) fn require_path_algebra(&self, what: &'static str) -> Result<()> {
        if self.is_path_algebra() {
            Ok(())
        } else {
            Err(CoreError::Scope(what))
        }
    }

    fn validate_relation(&self, r: &Relation) -> std::result::Result<(), String> {
        if r.terms.is_empty() || r.terms.iter().all(|(c, _)| *c == 0) {
            return Err("relation has no nonzero coefficient".into());
        }
        let mut ends = None;
        for (_, path) in &r.terms {
            if path.len() < 2 {
                return Err("relation path shorter than 2".into());
            }
            for w in path.windows(2) {
                let (a, b) = (&self.arrows[w[0]], &self.arrows[w[1]]);
                if a.target != b.source {
                    return Err(format!(
                        "relation path does not compose: t({}) != s({})",
                        a.id, b.id
                    ));
                }
            }
            let st = (
                self.arrows[path[0]].source,
                self.arrows[*path.last().unwrap()].target,
            );
            match ends {
                None => ends = Some(st),
                Some(e) if e != st => {
                    return Err("relation paths do not share source and target".into())
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn compute_topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        // smallest index first keeps the order canonical
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    ready.insert(a.target);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Parses the line-oriented quiver format.
    ///
    /// ```text
    /// vertices: 1 2
    /// arrow a: 1 -> 2
    /// arrow b: 1 -> 2
    /// relation: 2*a b - c d
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, message: String| CoreError::Parse { line, message };
        let mut vertices: Vec<String> = Vec::new();
        let mut arrows: Vec<(String, String, String)> = Vec::new();
        let mut raw_relations: Vec<(usize, RawRelation)> = Vec::new();

        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vertices:") {
                for v in rest.split_whitespace() {
                    if !valid_id(v) {
                        return Err(perr(line_no, format!("invalid vertex id '{v}'")));
                    }
                    if vertices.iter().any(|w| w == v) {
                        return Err(perr(line_no, format!("duplicate vertex '{v}'")));
                    }
                    vertices.push(v.to_string());
                }
            } else if let Some(rest) = line.strip_prefix("relation:") {
                let terms = parse_relation(rest).map_err(|m| perr(line_no, m))?;
                raw_relations.push((line_no, terms));
            } else if let Some(rest) = line.strip_prefix("arrow") {
                let (id, ends) = rest
                    .split_once(':')
                    .ok_or_else(|| perr(line_no, "expected 'arrow <id>: <src> -> <dst>'".into()))?;
                let id = id.trim();
                if !valid_id(id) {
                    return Err(perr(line_no, format!("invalid arrow id '{id}'")));
                }
                let (s, t) = ends
                    .split_once("->")
                    .ok_or_else(|| perr(line_no, "expected '<src> -> <dst>'".into()))?;
                let (s, t) = (s.trim(), t.trim());
                for v in [s, t] {
                    if !vertices.iter().any(|w| w == v) {
                        return Err(perr(
                            line_no,
                            format!("undeclared vertex '{v}' in arrow {id}"),
                        ));
                    }
                }
                if arrows.iter().any(|(a, _, _)| a == id) {
                    return Err(perr(line_no, format!("duplicate arrow '{id}'")));
                }
                arrows.push((id.to_string(), s.to_string(), t.to_string()));
            } else {
                return Err(perr(line_no, format!("unrecognized line '{line}'")));
            }
        }

        let mut q = Quiver::new(vertices, arrows, Vec::new())?;
        let mut relations = Vec::with_capacity(raw_relations.len());
        for (line_no, terms) in raw_relations {
            let mut rel = Relation { terms: Vec::new() };
            for (c, path) in terms {
                let idx = path
                    .iter()
                    .map(|a| {
                        q.arrow_index(a)
                            .ok_or_else(|| perr(line_no, format!("undeclared arrow '{a}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rel.terms.push((c, idx));
            }
            q.validate_relation(&rel).map_err(|m| perr(line_no, m))?;
            relations.push(rel);
        }
        q.relations = relations;
        Ok(q)
    }

    /// Renders the quiver in the same format accepted by [`Quiver::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("vertices: {}\n", self.vertices.join(" "));
        for a in &self.arrows {
            s += &format!(
                "arrow {}: {} -> {}\n",
                a.id, self.vertices[a.source], self.vertices[a.target]
            );
        }
        for r in &self.relations {
            s += "relation:";
            for (k, (c, path)) in r.terms.iter().enumerate() {
                let sign = if *c < 0 { "-" } else { "+" };
                if k > 0 || *c < 0 {
                    s += &format!(" {sign}");
                }
                if c.abs() != 1 {
                    s += &format!(" {}*", c.abs());
                }
                for a in path {
                    s += &format!(" {}", self.arrows[*a].id);
                }
            }
            s += "\n";
        }
        s
    }

    pub fn dim_vector(&self, entries: Vec<usize>) -> Result<DimVector> {
        if entries.len() != self.num_vertices() {
            return Err(CoreError::InvalidInput(format!(
                "dimension vector has {} entries, quiver has {} vertices",
                entries.len(),
                self.num_vertices()
            )));
        }
        Ok(DimVector(entries))
    }

    pub fn theta_vector(&self, coeffs: Vec<i64>) -> Result<ThetaVector> {
        if coeffs.len() != self.num_vertices() {
            return Err(CoreError::InvalidInput(format!(
                "theta vector has {} entries, quiver has {} vertices",
                coeffs.len(),
                self.num_vertices()
            )));
        }
        Ok(ThetaVector(coeffs))
    }
}

fn parse_relation(src: &str) -> std::result::Result<Vec<(i64, Vec<String>)>, String> {
    let mut tokens = Vec::new();
    for word in src.split_whitespace() {
        let mut cur = String::new();
        for ch in word.chars() {
            if matches!(ch, '*' | '+' | '-') {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(ch.to_string());
            } else {
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            tokens.push(cur);
        }
    }
    if tokens.is_empty() {
        return Err("empty relation".into());
    }

    let mut terms = Vec::new();
    let mut i = 0;
    let mut first = true;
    while i < tokens.len() {
        let mut sign = 1i64;
        match tokens[i].as_str() {
            "+" => i += 1,
            "-" => {
                sign = -1;
                i += 1;
            }
            _ if !first => return Err(format!("expected '+' or '-' before '{}'", tokens[i])),
            _ => {}
        }
        first = false;
        let mut coeff = 1i64;
        if i + 1 < tokens.len() && tokens[i + 1] == "*" {
            coeff = tokens[i]
                .parse()
                .map_err(|_| format!("invalid coefficient '{}'", tokens[i]))?;
            i += 2;
        }
        let mut path = Vec::new();
        while i < tokens.len() && !matches!(tokens[i].as_str(), "+" | "-" | "*") {
            path.push(tokens[i].clone());
            i += 1;
        }
        if i < tokens.len() && tokens[i] == "*" {
            return Err("misplaced '*'".into());
        }
        if path.is_empty() {
            return Err("relation term has no path".into());
        }
        if path.len() < 2 {
            return Err("relation path shorter than 2".into());
        }
        terms.push((sign * coeff, path));
    }
    Ok(terms)
}

/// A dimension vector, indexed by vertex in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<usize>);

impl DimVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, l: usize) -> DimVector {
        DimVector(self.0.iter().map(|&x| x * l).collect())
    }

    pub fn plus(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn as_class(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }

    /// Parses `"a,b,..."`.
    pub fn parse_list(s: &str) -> Result<DimVector> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| CoreError::InvalidInput(format!("invalid dimension entry '{t}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(DimVector)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An element of `K_0(proj)` in the basis of indecomposable projectives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ThetaVector(pub Vec<i64>);

impl ThetaVector {
    pub fn scaled(&self, l: i64) -> ThetaVector {
        ThetaVector(self.0.iter().map(|&x| x * l).collect())
    }

    pub fn plus(&self, other: &ThetaVector) -> ThetaVector {
        ThetaVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Unit vector `[P_i]`.
    pub fn unit(n: usize, i: usize) -> ThetaVector {
        let mut v = vec![0; n];
        v[i] = 1;
        ThetaVector(v)
    }

    pub fn positive_part(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x.max(0) as usize).collect()
    }

    pub fn negative_part(&self) -> Vec<usize> {
        self.0.iter().map(|&x| (-x).max(0) as usize).collect()
    }

    pub fn parse_list(s: &str) -> Result<ThetaVector> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| CoreError::InvalidInput(format!("invalid theta entry '{t}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(ThetaVector)
    }
}

impl fmt::Display for ThetaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dimension vectors of the indecomposable projectives `P_i`: the entry at
/// `j` counts paths from `i` to `j`, trivial path included.
pub fn projective_dim_vectors(q: &Quiver) -> Result<Vec<DimVector>> {
    q.require_path_algebra("projective dimension vectors require an acyclic path algebra")?;
    let order = q.topological_order().unwrap();
    let n = q.num_vertices();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut count = vec![0usize; n];
        count[i] = 1;
        for &v in order {
            if count[v] == 0 {
                continue;
            }
            for a in q.arrows().iter().filter(|a| a.source == v) {
                count[a.target] += count[v];
            }
        }
        out.push(DimVector(count));
    }
    Ok(out)
}

/// `ι(θ) = Σ θ_i dimv P_i`, possibly with negative entries.
pub fn iota(q: &Quiver, theta: &ThetaVector) -> Result<Vec<i64>> {
    let proj = projective_dim_vectors(q)?;
    let n = q.num_vertices();
    let mut out = vec![0i64; n];
    for (i, p) in proj.iter().enumerate() {
        for (o, &x) in out.iter_mut().zip(&p.0) {
            *o += theta.0[i] * x as i64;
        }
    }
    Ok(out)
}

/// Solves `Σ θ_i dimv P_i = class` exactly. The system is unitriangular in
/// topological order, so back-substitution stays in the integers.
pub fn iota_inverse_class(q: &Quiver, class: &[i64]) -> Result<ThetaVector> {
    let proj = projective_dim_vectors(q)?;
    if class.len() != q.num_vertices() {
        return Err(CoreError::InvalidInput(
            "class length does not match vertex count".into(),
        ));
    }
    let order = q.topological_order().unwrap();
    let mut theta = vec![0i64; class.len()];
    let mut solved: Vec<usize> = Vec::new();
    for &j in order {
        let acc: i64 = solved.iter().map(|&i| theta[i] * proj[i].0[j] as i64).sum();
        theta[j] = class[j] - acc;
        solved.push(j);
    }
    Ok(ThetaVector(theta))
}

pub fn iota_inverse(q: &Quiver, d: &DimVector) -> Result<ThetaVector> {
    iota_inverse_class(q, &d.as_class())
}

/// `⟨θ, d⟩ = Σ θ_i d_i`, the pairing with `⟨[P_i], dimv S_j⟩ = δ_ij`.
pub fn euler_pairing(theta: &ThetaVector, d: &[i64]) -> i64 {
    theta.0.iter().zip(d).map(|(a, b)| a * b).sum()
}

/// The Euler form on dimension vectors of a path algebra:
/// `Σ_i d_i e_i - Σ_α d_{s(α)} e_{t(α)}`.
pub fn euler_form_mod(q: &Quiver, d: &[i64], e: &[i64]) -> i64 {
    let vertex: i64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
    let arrow: i64 = q.arrows().iter().map(|a| d[a.source] * e[a.target]).sum();
    vertex - arrow
}

/// Tits form `q(d) = ⟨d, d⟩`.
pub fn quadratic_form(q: &Quiver, d: &DimVector) -> i64 {
    let c = d.as_class();
    euler_form_mod(q, &c, &c)
}
