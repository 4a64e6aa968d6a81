//! Qubit connectivity graphs.
//!
//! The synthesis recursion removes qubits logically, so most queries take an
//! `active` mask instead of mutating the graph.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

pub const UNREACHABLE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    num_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    dist: Vec<Vec<usize>>,
}

impl Topology {
    /// Builds a connected topology. Duplicate edges are ignored.
    pub fn new(num_qubits: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidArgument("topology needs at least one qubit".into()));
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= num_qubits {
                    return Err(Error::QubitOutOfRange { index: w, num_qubits });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let dist = floyd_warshall(num_qubits, &set);
        if dist[0].contains(&UNREACHABLE) {
            return Err(Error::Disconnected);
        }
        Ok(Topology { num_qubits, edges: set, adjacency, dist })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::new(n, &edges).expect("complete graph")
    }

    pub fn line(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges).expect("line graph")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::new(n, &edges).expect("cycle graph")
    }

    /// `rows x cols` grid, qubit `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let q = r * cols + c;
                if c + 1 < cols {
                    edges.push((q, q + 1));
                }
                if r + 1 < rows {
                    edges.push((q, q + cols));
                }
            }
        }
        Self::new(rows * cols, &edges).expect("grid graph")
    }

    /// Star with centre qubit 0.
    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Self::new(n, &edges).expect("star graph")
    }

    /// Text format: a `qubits <q>` header followed by one `u v` edge per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut num_qubits = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: idx + 1, message };
            let fields: Vec<_> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(err(format!("expected two fields, got '{}'", line)));
            }
            match num_qubits {
                None => {
                    if fields[0] != "qubits" {
                        return Err(err("expected header 'qubits <q>'".into()));
                    }
                    num_qubits =
                        Some(fields[1].parse::<usize>().map_err(|_| err(format!("invalid qubit count '{}'", fields[1])))?);
                }
                Some(_) => {
                    let u = fields[0].parse::<usize>().map_err(|_| err(format!("invalid qubit '{}'", fields[0])))?;
                    let v = fields[1].parse::<usize>().map_err(|_| err(format!("invalid qubit '{}'", fields[1])))?;
                    edges.push((u, v));
                }
            }
        }
        let n = num_qubits.ok_or(Error::Parse { line: 0, message: "missing 'qubits <q>' header".into() })?;
        Self::new(n, &edges)
    }

    /// Parses a preset such as `complete:5`, `line:7`, `cycle:6`, `grid:4x4`
    /// or `file:<path>`.
    pub fn from_preset(spec: &str) -> Result<Self> {
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("invalid topology '{}'", spec)))?;
        let count = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::InvalidArgument(format!("invalid size '{}' in topology '{}'", s, spec)))
        };
        match kind {
            "complete" => Ok(Self::complete(count(arg)?)),
            "line" => Ok(Self::line(count(arg)?)),
            "cycle" => Ok(Self::cycle(count(arg)?)),
            "grid" => {
                let (r, c) = arg
                    .split_once('x')
                    .ok_or_else(|| Error::InvalidArgument(format!("grid expects RxC, got '{}'", arg)))?;
                Ok(Self::grid(count(r)?, count(c)?))
            }
            "file" => Self::parse(&std::fs::read_to_string(Path::new(arg))?),
            _ => Err(Error::InvalidArgument(format!("unknown topology kind '{}'", kind))),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.dist[u][v]
    }

    pub fn distances(&self) -> &[Vec<usize>] {
        &self.dist
    }

    pub fn all_active(&self) -> Vec<bool> {
        vec![true; self.num_qubits]
    }

    /// Neighbours of `v` inside the active set, ascending.
    pub fn neighbors(&self, v: usize, active: &[bool]) -> Vec<usize> {
        let mut out: Vec<_> = self.adjacency[v].iter().copied().filter(|&w| active[w]).collect();
        out.sort_unstable();
        out
    }

    /// Whether the subgraph induced by `active` is connected (an empty set
    /// counts as connected).
    pub fn is_connected(&self, active: &[bool]) -> bool {
        let Some(start) = active.iter().position(|&a| a) else {
            return true;
        };
        let seen = self.reachable(start, active);
        active.iter().zip(&seen).all(|(&a, &s)| !a || s)
    }

    /// True iff removing `v` keeps the induced subgraph on `active \ {v}`
    /// connected.
    pub fn is_non_cutting(&self, v: usize, active: &[bool]) -> Result<bool> {
        if !active.get(v).copied().unwrap_or(false) {
            return Err(Error::Inactive(v));
        }
        let mut rest = active.to_vec();
        rest[v] = false;
        Ok(self.is_connected(&rest))
    }

    /// Active qubits whose removal keeps the active subgraph connected.
    pub fn non_cutting(&self, active: &[bool]) -> Vec<usize> {
        (0..self.num_qubits).filter(|&v| active[v] && self.is_non_cutting(v, active).unwrap_or(false)).collect()
    }

    fn reachable(&self, start: usize, active: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.num_qubits];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if active[w] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// BFS parents from `root` restricted to `active`. Index `root` maps to
    /// itself, unreachable vertices to `None`.
    fn bfs_parents(&self, root: usize, active: &[bool]) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.num_qubits];
        parent[root] = Some(root);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if active[w] && parent[w].is_none() {
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Approximate Steiner tree spanning `terminals` inside the active
    /// subgraph. The tree is grown from the first terminal by repeatedly
    /// attaching the nearest remaining terminal along a shortest path, then
    /// non-terminal leaves are pruned.
    pub fn steiner_tree(&self, terminals: &[usize], active: &[bool]) -> Result<SteinerTree> {
        let &root = terminals.first().ok_or(Error::NoTerminals)?;
        for &t in terminals {
            if !active.get(t).copied().unwrap_or(false) {
                return Err(Error::Inactive(t));
            }
        }
        let n = self.num_qubits;
        let mut in_tree = vec![false; n];
        in_tree[root] = true;
        let mut is_terminal = vec![false; n];
        for &t in terminals {
            is_terminal[t] = true;
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut pending: Vec<usize> = terminals.iter().copied().filter(|&t| t != root).collect();
        pending.sort_unstable();
        pending.dedup();

        while !pending.is_empty() {
            // multi-source BFS from the current tree
            let mut parent = vec![None; n];
            let mut queue = VecDeque::new();
            for v in 0..n {
                if in_tree[v] {
                    parent[v] = Some(v);
                    queue.push_back(v);
                }
            }
            let mut hit = None;
            'bfs: while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if active[w] && parent[w].is_none() {
                        parent[w] = Some(u);
                        if is_terminal[w] {
                            hit = Some(w);
                            break 'bfs;
                        }
                        queue.push_back(w);
                    }
                }
            }
            let Some(mut v) = hit else {
                return Err(Error::Disconnected);
            };
            while !in_tree[v] {
                let p = parent[v].expect("bfs parent");
                edges.push((p, v));
                in_tree[v] = true;
                v = p;
            }
            pending.retain(|&t| !in_tree[t]);
        }

        // prune non-terminal leaves
        loop {
            let mut degree = vec![0usize; n];
            for &(u, v) in &edges {
                degree[u] += 1;
                degree[v] += 1;
            }
            let before = edges.len();
            edges.retain(|&(u, v)| !((degree[u] == 1 && !is_terminal[u]) || (degree[v] == 1 && !is_terminal[v])));
            if edges.len() == before {
                break;
            }
        }
        let mut nodes: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        nodes.push(root);
        nodes.sort_unstable();
        nodes.dedup();
        Ok(SteinerTree { nodes, edges })
    }

    /// Shortest path between two active qubits (inclusive).
    pub fn shortest_path(&self, from: usize, to: usize, active: &[bool]) -> Option<Vec<usize>> {
        let parent = self.bfs_parents(to, active);
        parent[from]?;
        let mut path = vec![from];
        let mut v = from;
        while v != to {
            v = parent[v]?;
            path.push(v);
        }
        Some(path)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.num_qubits)?;
        for (u, v) in &self.edges {
            writeln!(f, "{} {}", u, v)?;
        }
        Ok(())
    }
}

fn floyd_warshall(n: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v) in edges {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                if d[k][j] == UNREACHABLE {
                    continue;
                }
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerTree {
    /// Vertices of the tree, ascending. Always contains at least one terminal.
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl SteinerTree {
    /// `(parent, child)` pairs ordered so that every child appears before its
    /// parent appears as a child (leaves first).
    pub fn post_order(&self, root: usize) -> Vec<(usize, usize)> {
        let mut adj: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &(u, v) in &self.edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        // BFS order from the root, reversed, gives leaves-first edges
        let mut order = Vec::new();
        let mut seen = std::collections::BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if let Some(ns) = adj.get(&u) {
                let mut ns = ns.clone();
                ns.sort_unstable();
                for w in ns {
                    if seen.insert(w) {
                        order.push((u, w));
                        queue.push_back(w);
                    }
                }
            }
        }
        order.reverse();
        order
    }
}
