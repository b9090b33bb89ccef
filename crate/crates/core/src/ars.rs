//! Finite abstract rewriting systems under the discrete topology.
//!
//! On a discrete space the topological rewriting relation coincides with the
//! reflexive-transitive closure `->*`, so every normal-form property is a
//! finite graph property here and can be checked exhaustively.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArsError {
    #[error("element {element} out of range for a system of size {size}")]
    OutOfRange { element: usize, size: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid conversion: {0}")]
    InvalidConversion(String),
    #[error("conversion ends at {end} but should end at {start}")]
    EndpointMismatch { start: usize, end: usize },
}

/// Elements `0..size` with a one-step relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteARS {
    size: usize,
    succ: Vec<Vec<usize>>,
}

/// The normal-form properties of a system, decided exhaustively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ArsProperties {
    /// Every element reaches some normal form.
    pub normalising: bool,
    /// `a <->* b` with `b` normal implies `a ->* b`.
    pub nf_property: bool,
    /// Convertible normal forms are equal.
    pub unique_nf_property: bool,
    /// No element reaches two distinct normal forms.
    pub unique_nf_reached: bool,
    /// Every peak `b <-* a ->* c` is joinable.
    pub confluent: bool,
    /// No self-loops; the hypothesis under which a fixed point of `->*`
    /// is a normal form.
    pub anti_reflexive: bool,
}

impl FiniteARS {
    pub fn new<I>(size: usize, edges: I) -> Result<Self, ArsError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut succ = vec![Vec::new(); size];
        for (a, b) in edges {
            for e in [a, b] {
                if e >= size {
                    return Err(ArsError::OutOfRange { element: e, size });
                }
            }
            succ[a].push(b);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Ok(FiniteARS { size, succ })
    }

    /// The system whose edge `(a, b)` is present iff bit `a * size + b` of
    /// `mask` is set.
    pub fn from_edge_mask(size: usize, mask: u64) -> Self {
        assert!(size * size <= 64, "edge mask too small for size {size}");
        let edges = (0..size * size)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| (k / size, k % size));
        Self::new(size, edges).expect("in range")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ
            .get(a)
            .is_some_and(|s| s.binary_search(&b).is_ok())
    }

    fn check(&self, a: usize) -> Result<(), ArsError> {
        if a < self.size {
            Ok(())
        } else {
            Err(ArsError::OutOfRange {
                element: a,
                size: self.size,
            })
        }
    }

    fn reach_flags(&self, a: usize) -> Vec<bool> {
        let mut seen = vec![false; self.size];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(x) = stack.pop() {
            for &y in &self.succ[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// `{b : a ->* b}`.
    pub fn reachable(&self, a: usize) -> Result<BTreeSet<usize>, ArsError> {
        self.check(a)?;
        Ok(self
            .reach_flags(a)
            .into_iter()
            .enumerate()
            .filter_map(|(b, r)| r.then_some(b))
            .collect())
    }

    pub fn is_normal_form(&self, a: usize) -> bool {
        self.succ[a].is_empty()
    }

    pub fn normal_forms(&self) -> BTreeSet<usize> {
        (0..self.size).filter(|&a| self.is_normal_form(a)).collect()
    }

    /// Connected components of the symmetric closure, i.e. the classes of `<->*`.
    fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.size).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (a, b) in self.edges() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        (0..self.size).map(|x| find(&mut parent, x)).collect()
    }

    pub fn check_properties(&self) -> ArsProperties {
        let reach: Vec<Vec<bool>> = (0..self.size).map(|a| self.reach_flags(a)).collect();
        let nfs: Vec<usize> = self.normal_forms().into_iter().collect();
        let comp = self.components();
        let all = |f: &dyn Fn(usize) -> bool| (0..self.size).all(f);

        let normalising = all(&|a| nfs.iter().any(|&b| reach[a][b]));
        let nf_property = all(&|a| {
            nfs.iter()
                .filter(|&&b| comp[a] == comp[b])
                .all(|&b| reach[a][b])
        });
        let unique_nf_property = nfs
            .iter()
            .all(|&a| nfs.iter().all(|&b| comp[a] != comp[b] || a == b));
        let unique_nf_reached = all(&|a| nfs.iter().filter(|&&b| reach[a][b]).count() <= 1);
        let confluent = all(&|a| {
            let r = &reach[a];
            (0..self.size).filter(|&b| r[b]).all(|b| {
                (0..self.size)
                    .filter(|&c| r[c])
                    .all(|c| (0..self.size).any(|d| reach[b][d] && reach[c][d]))
            })
        });
        let anti_reflexive = self.edges().all(|(a, b)| a != b);
        ArsProperties {
            normalising,
            nf_property,
            unique_nf_property,
            unique_nf_reached,
            confluent,
            anti_reflexive,
        }
    }

    /// A shortest reduction path from `a` to a normal form, excluding `a`.
    fn path_to_normal_form(&self, a: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.size];
        let mut queue = VecDeque::from([a]);
        parent[a] = a;
        while let Some(x) = queue.pop_front() {
            if self.is_normal_form(x) {
                let mut path = Vec::new();
                let mut cur = x;
                while cur != a {
                    path.push(cur);
                    cur = parent[cur];
                }
                path.reverse();
                return Some(path);
            }
            for &y in &self.succ[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

impl fmt::Display for FiniteARS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.size)?;
        for (a, b) in self.edges() {
            writeln!(f, "{a} -> {b}")?;
        }
        Ok(())
    }
}

/// Parses `n=<size>` followed by one `a -> b` edge per line.
pub fn parse_system(text: &str) -> Result<FiniteARS, ArsError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line, message: &str| ArsError::Parse {
        line,
        message: message.to_string(),
    };
    let (line, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing `n=<size>` header"))?;
    let size: usize = header
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err(line, "expected `n=<size>`"))?;
    let mut edges = Vec::new();
    for (line, l) in lines {
        let (a, b) = l
            .split_once("->")
            .ok_or_else(|| err(line, "expected `a -> b`"))?;
        let a: usize = a.trim().parse().map_err(|_| err(line, "bad source"))?;
        let b: usize = b.trim().parse().map_err(|_| err(line, "bad target"))?;
        edges.push((a, b));
    }
    FiniteARS::new(size, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `prev -> next`
    Forward,
    /// `prev <- next`
    Backward,
}

/// A chain `c_0 <-> c_1 <-> ... <-> c_l`, each link an edge in its direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conversion {
    pub start: usize,
    pub steps: Vec<(Direction, usize)>,
}

impl Conversion {
    pub fn new(start: usize, steps: Vec<(Direction, usize)>) -> Self {
        Conversion { start, steps }
    }

    pub fn end(&self) -> usize {
        self.steps.last().map_or(self.start, |&(_, e)| e)
    }

    pub fn elements(&self) -> Vec<usize> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|&(_, e)| e))
            .collect()
    }

    /// Positions `k` (into [`Conversion::elements`]) with `c_{k-1} -> c_k <- c_{k+1}`.
    pub fn valleys(&self) -> Vec<usize> {
        self.steps
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].0 == Direction::Forward && w[1].0 == Direction::Backward)
            .map(|(k, _)| k + 1)
            .collect()
    }

    pub fn validate(&self, sys: &FiniteARS) -> Result<(), ArsError> {
        sys.check(self.start)?;
        let mut prev = self.start;
        for (k, &(dir, next)) in self.steps.iter().enumerate() {
            sys.check(next)?;
            let ok = match dir {
                Direction::Forward => sys.has_edge(prev, next),
                Direction::Backward => sys.has_edge(next, prev),
            };
            if !ok {
                return Err(ArsError::InvalidConversion(format!(
                    "link {} ({prev} {} {next}) is not an edge",
                    k + 1,
                    dir
                )));
            }
            prev = next;
        }
        Ok(())
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        })
    }
}

impl fmt::Display for Conversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for (d, e) in &self.steps {
            write!(f, " {d} {e}")?;
        }
        Ok(())
    }
}

/// Parses alternating element and direction tokens, e.g. `4 <- 0 -> 2`.
pub fn parse_conversion(text: &str) -> Result<Conversion, ArsError> {
    let err = |message: String| ArsError::Parse { line: 1, message };
    let mut tokens = text.split_whitespace();
    let element = |t: Option<&str>| -> Result<usize, ArsError> {
        let t = t.ok_or_else(|| err("expected an element".into()))?;
        t.parse().map_err(|_| err(format!("bad element `{t}`")))
    };
    let start = element(tokens.next())?;
    let mut steps = Vec::new();
    while let Some(t) = tokens.next() {
        let dir = match t {
            "->" => Direction::Forward,
            "<-" => Direction::Backward,
            other => return Err(err(format!("expected `->` or `<-`, found `{other}`"))),
        };
        steps.push((dir, element(tokens.next())?));
    }
    Ok(Conversion { start, steps })
}

/// Removes valleys one at a time, right-most first, and returns every
/// intermediate conversion (the input first, the valley-free result last).
///
/// For the right-most valley `c_i`, everything after `c_i` is replaced by a
/// reduction from `c_i` to its normal form, which must be the final endpoint.
pub fn eliminate_valleys_traced(
    sys: &FiniteARS,
    conv: &Conversion,
) -> Result<Vec<Conversion>, ArsError> {
    conv.validate(sys)?;
    let props = sys.check_properties();
    if !props.normalising || !props.unique_nf_reached {
        return Err(ArsError::PreconditionFailed(
            "system must be normalising with unique normal forms reached".into(),
        ));
    }
    let (a, b) = (conv.start, conv.end());
    if !sys.is_normal_form(a) || !sys.is_normal_form(b) {
        return Err(ArsError::PreconditionFailed(
            "conversion endpoints must be normal forms".into(),
        ));
    }
    let mut history = vec![conv.clone()];
    let mut current = conv.clone();
    while let Some(&i) = current.valleys().last() {
        let pivot = current.elements()[i];
        let path = sys
            .path_to_normal_form(pivot)
            .expect("normalising system reaches a normal form");
        let mut steps = current.steps[..i].to_vec();
        steps.extend(path.iter().map(|&e| (Direction::Forward, e)));
        let next = Conversion::new(a, steps);
        if next.end() != b {
            return Err(ArsError::EndpointMismatch {
                start: b,
                end: next.end(),
            });
        }
        debug_assert_eq!(next.valleys().len() + 1, current.valleys().len());
        history.push(next.clone());
        current = next;
    }
    if a != b {
        return Err(ArsError::EndpointMismatch { start: a, end: b });
    }
    Ok(history)
}

/// Valley-free conversion with the same endpoints as `conv`.
pub fn eliminate_valleys(sys: &FiniteARS, conv: &Conversion) -> Result<Conversion, ArsError> {
    Ok(eliminate_valleys_traced(sys, conv)?
        .pop()
        .expect("history starts with the input"))
}
