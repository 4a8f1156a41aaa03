//! Concrete discrete groups, word-metric balls and homomorphisms.
//!
//! Groups are one of a handful of built-in kinds (cyclic, free abelian, free,
//! explicit multiplication table, direct product). Every element has a unique
//! canonical form, so structural equality of [`GroupElement`] is equality in
//! the group.

mod ball;
mod hom;

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use ball::{BallIndex, DEFAULT_ELEMENT_CAP};
pub use hom::{enumerate_homomorphisms, GroupHom, HomClassification};

/// Groups up to this order get a full associativity check; larger tables are sampled.
const FULL_ASSOCIATIVITY_ORDER: usize = 64;
const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: String, b: String, c: String },
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(String),
    #[error("identity element does not act as identity")]
    BadIdentity,
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("generator set is empty")]
    EmptyGeneratorSet,
    #[error("ball exceeds the element cap of {cap}")]
    RadiusOverflow { cap: usize },
    #[error("map is not a homomorphism: phi({x}*{y}) != phi({x})*phi({y})")]
    NotAHomomorphism { x: String, y: String },
    #[error("image of generator {generator} does not satisfy its order {order}")]
    OrderViolation { generator: String, order: u64 },
    #[error("homomorphism is not an epimorphism")]
    NotEpimorphism,
    #[error("operation requires a finite group")]
    InfiniteGroup,
    #[error("element {0} is not in the group")]
    NotAnElement(String),
    #[error("cannot parse element {0:?}")]
    ParseElement(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Canonical form of a group element.
///
/// `Index` covers cyclic residues and table indices, `Vector` free abelian
/// tuples, `Word` reduced words in a free group (letter `k+1` is the k-th
/// generator, `-(k+1)` its inverse) and `Pair` elements of a direct product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Index(usize),
    Vector(Vec<i64>),
    Word(Vec<i32>),
    Pair(Box<GroupElement>, Box<GroupElement>),
}

impl GroupElement {
    pub fn pair(left: GroupElement, right: GroupElement) -> Self {
        GroupElement::Pair(Box::new(left), Box::new(right))
    }

    /// Integer shorthand for `ℤ` elements.
    pub fn int(n: i64) -> Self {
        GroupElement::Vector(vec![n])
    }
}

/// Explicit finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTable {
    labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
}

impl FiniteTable {
    /// Validates a multiplication table. The inverse table is derived when absent
    /// and checked when given.
    pub fn new(
        labels: Vec<String>,
        mul: Vec<Vec<usize>>,
        inverses: Option<Vec<usize>>,
        identity: Option<usize>,
    ) -> Result<Self, GroupError> {
        let n = mul.len();
        if n == 0 {
            return Err(GroupError::MalformedTable("empty table".into()));
        }
        if labels.len() != n {
            return Err(GroupError::MalformedTable(format!(
                "{} labels for a table of order {n}",
                labels.len()
            )));
        }
        let distinct: HashSet<&String> = labels.iter().collect();
        if distinct.len() != n {
            return Err(GroupError::MalformedTable("duplicate labels".into()));
        }
        for row in &mul {
            if row.len() != n {
                return Err(GroupError::MalformedTable("table is not square".into()));
            }
            if row.iter().any(|&k| k >= n) {
                return Err(GroupError::MalformedTable("entry out of range".into()));
            }
        }
        let identity = match identity {
            Some(e) if e < n => e,
            Some(_) => return Err(GroupError::BadIdentity),
            None => (0..n)
                .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
                .ok_or(GroupError::BadIdentity)?,
        };
        if (0..n).any(|x| mul[identity][x] != x || mul[x][identity] != x) {
            return Err(GroupError::BadIdentity);
        }
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            let found = (0..n).find(|&y| mul[x][y] == identity && mul[y][x] == identity);
            match found {
                Some(y) => inv[x] = y,
                None => return Err(GroupError::MissingInverse(labels[x].clone())),
            }
        }
        if let Some(given) = inverses {
            if given.len() != n {
                return Err(GroupError::MalformedTable("inverse table has wrong length".into()));
            }
            if let Some(x) = (0..n).find(|&x| given[x] != inv[x]) {
                return Err(GroupError::MissingInverse(labels[x].clone()));
            }
        }
        let table = FiniteTable { labels, mul, inv, identity };
        table.check_associative()?;
        Ok(table)
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.mul.len();
        let fails = |a: usize, b: usize, c: usize| self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]];
        let witness = |a: usize, b: usize, c: usize| GroupError::NonAssociative {
            a: self.labels[a].clone(),
            b: self.labels[b].clone(),
            c: self.labels[c].clone(),
        };
        if n <= FULL_ASSOCIATIVITY_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if fails(a, b, c) {
                            return Err(witness(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if fails(a, b, c) {
                    return Err(witness(a, b, c));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }
}

/// A discrete group of one of the built-in kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupModel {
    /// `ℤ/n`, elements `Index(0..n)`.
    Cyclic(u64),
    /// `ℤ^rank`, elements `Vector` of length `rank`.
    FreeAbelian(usize),
    /// Free group on `rank` letters, elements reduced `Word`s.
    Free(usize),
    Finite(FiniteTable),
    Product(Box<GroupModel>, Box<GroupModel>),
}

impl GroupModel {
    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Unsupported("cyclic group of order 0 (use free_abelian rank 1)".into()));
        }
        Ok(GroupModel::Cyclic(n))
    }

    pub fn integers() -> Self {
        GroupModel::FreeAbelian(1)
    }

    pub fn product(left: GroupModel, right: GroupModel) -> Self {
        GroupModel::Product(Box::new(left), Box::new(right))
    }

    /// Symmetric group on `n` points as an explicit table; permutations are
    /// listed in lexicographic order and composed right-to-left.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 6 {
            return Err(GroupError::Unsupported(format!("symmetric group S{n}")));
        }
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        loop {
            let mut p = perms.last().unwrap().clone();
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
            perms.push(p);
        }
        let index_of = |q: &Vec<usize>| perms.iter().position(|p| p == q).unwrap();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index_of(&(0..n).map(|k| a[b[k]]).collect()))
                    .collect()
            })
            .collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|k| (k + 1).to_string()).collect::<String>())
            .collect();
        Ok(GroupModel::Finite(FiniteTable::new(labels, mul, None, Some(0))?))
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupModel::Cyclic(_) => GroupElement::Index(0),
            GroupModel::FreeAbelian(d) => GroupElement::Vector(vec![0; *d]),
            GroupModel::Free(_) => GroupElement::Word(Vec::new()),
            GroupModel::Finite(t) => GroupElement::Index(t.identity),
            GroupModel::Product(l, r) => GroupElement::pair(l.identity(), r.identity()),
        }
    }

    /// Whether `x` is a well-formed canonical element of this group.
    pub fn contains(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (GroupModel::Cyclic(n), GroupElement::Index(k)) => (*k as u64) < *n,
            (GroupModel::FreeAbelian(d), GroupElement::Vector(v)) => v.len() == *d,
            (GroupModel::Free(r), GroupElement::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *r)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupModel::Finite(t), GroupElement::Index(k)) => *k < t.order(),
            (GroupModel::Product(l, r), GroupElement::Pair(a, b)) => l.contains(a) && r.contains(b),
            _ => false,
        }
    }

    pub fn check_element(&self, x: &GroupElement) -> Result<(), GroupError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GroupError::NotAnElement(format!("{x:?}")))
        }
    }

    /// Group product. Both arguments must be elements of this group.
    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (GroupModel::Cyclic(n), GroupElement::Index(x), GroupElement::Index(y)) => {
                GroupElement::Index(((*x as u64 + *y as u64) % n) as usize)
            }
            (GroupModel::FreeAbelian(_), GroupElement::Vector(x), GroupElement::Vector(y)) => {
                GroupElement::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupModel::Free(_), GroupElement::Word(x), GroupElement::Word(y)) => {
                let mut w = x.clone();
                for &l in y {
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                GroupElement::Word(w)
            }
            (GroupModel::Finite(t), GroupElement::Index(x), GroupElement::Index(y)) => {
                GroupElement::Index(t.mul[*x][*y])
            }
            (GroupModel::Product(l, r), GroupElement::Pair(a1, a2), GroupElement::Pair(b1, b2)) => {
                GroupElement::pair(l.multiply(a1, b1), r.multiply(a2, b2))
            }
            _ => panic!("multiply: elements {a:?}, {b:?} do not belong to {self:?}"),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (GroupModel::Cyclic(n), GroupElement::Index(x)) => {
                GroupElement::Index(((n - *x as u64) % n) as usize)
            }
            (GroupModel::FreeAbelian(_), GroupElement::Vector(x)) => {
                GroupElement::Vector(x.iter().map(|p| -p).collect())
            }
            (GroupModel::Free(_), GroupElement::Word(w)) => {
                GroupElement::Word(w.iter().rev().map(|l| -l).collect())
            }
            (GroupModel::Finite(t), GroupElement::Index(x)) => GroupElement::Index(t.inv[*x]),
            (GroupModel::Product(l, r), GroupElement::Pair(a1, a2)) => {
                GroupElement::pair(l.inverse(a1), r.inverse(a2))
            }
            _ => panic!("inverse: element {a:?} does not belong to {self:?}"),
        }
    }

    /// `x^k` for any integer `k`.
    pub fn power(&self, x: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse(x) } else { x.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            sq = self.multiply(&sq, &sq);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self, x: &GroupElement) -> bool {
        *x == self.identity()
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            GroupModel::Cyclic(n) => Some(*n as usize),
            GroupModel::FreeAbelian(0) | GroupModel::Free(0) => Some(1),
            GroupModel::FreeAbelian(_) | GroupModel::Free(_) => None,
            GroupModel::Finite(t) => Some(t.order()),
            GroupModel::Product(l, r) => Some(l.order()? * r.order()?),
        }
    }

    /// All elements of a finite group in canonical index order.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        let n = self.order()?;
        Some((0..n).map(|i| self.element_at(i)).collect())
    }

    /// Canonical index of an element of a finite group.
    pub fn element_index(&self, x: &GroupElement) -> Option<usize> {
        match (self, x) {
            (GroupModel::Cyclic(n), GroupElement::Index(k)) if (*k as u64) < *n => Some(*k),
            (GroupModel::Finite(t), GroupElement::Index(k)) if *k < t.order() => Some(*k),
            (GroupModel::FreeAbelian(0), GroupElement::Vector(v)) if v.is_empty() => Some(0),
            (GroupModel::Free(0), GroupElement::Word(w)) if w.is_empty() => Some(0),
            (GroupModel::Product(l, r), GroupElement::Pair(a, b)) => {
                let rn = r.order()?;
                Some(l.element_index(a)? * rn + r.element_index(b)?)
            }
            _ => None,
        }
    }

    /// Inverse of [`GroupModel::element_index`]; `i` must be below the order.
    pub fn element_at(&self, i: usize) -> GroupElement {
        match self {
            GroupModel::Cyclic(_) | GroupModel::Finite(_) => GroupElement::Index(i),
            GroupModel::FreeAbelian(_) | GroupModel::Free(_) => self.identity(),
            GroupModel::Product(l, r) => {
                let rn = r.order().expect("finite product");
                GroupElement::pair(l.element_at(i / rn), r.element_at(i % rn))
            }
        }
    }

    /// Order of an element of a finite group (smallest `k ≥ 1` with `x^k = e`).
    pub fn element_order(&self, x: &GroupElement) -> Option<u64> {
        let n = self.order()? as u64;
        let mut acc = x.clone();
        for k in 1..=n {
            if self.is_identity(&acc) {
                return Some(k);
            }
            acc = self.multiply(&acc, x);
        }
        None
    }

    /// A deterministic generating set: the standard generators for the free
    /// kinds and cyclic groups, a greedy minimal-by-index set for tables.
    pub fn canonical_generators(&self) -> Vec<GroupElement> {
        match self {
            GroupModel::Cyclic(1) => Vec::new(),
            GroupModel::Cyclic(_) => vec![GroupElement::Index(1)],
            GroupModel::FreeAbelian(d) => (0..*d)
                .map(|i| {
                    let mut v = vec![0; *d];
                    v[i] = 1;
                    GroupElement::Vector(v)
                })
                .collect(),
            GroupModel::Free(r) => (1..=*r as i32).map(|l| GroupElement::Word(vec![l])).collect(),
            GroupModel::Finite(_) => {
                let elements = self.elements().expect("finite");
                let mut gens = Vec::new();
                let mut span: HashSet<GroupElement> = HashSet::from([self.identity()]);
                for x in elements {
                    if !span.contains(&x) {
                        gens.push(x);
                        span = self.generated_subgroup(&gens);
                    }
                }
                gens
            }
            GroupModel::Product(l, r) => {
                let re = r.identity();
                let le = l.identity();
                l.canonical_generators()
                    .into_iter()
                    .map(|g| GroupElement::pair(g, re.clone()))
                    .chain(r.canonical_generators().into_iter().map(|h| GroupElement::pair(le.clone(), h)))
                    .collect()
            }
        }
    }

    /// Subgroup generated by `gens` inside a finite group.
    pub fn generated_subgroup(&self, gens: &[GroupElement]) -> HashSet<GroupElement> {
        let mut seen: HashSet<GroupElement> = HashSet::from([self.identity()]);
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                for y in [self.multiply(&x, g), self.multiply(&x, &self.inverse(g))] {
                    if seen.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
        }
        seen
    }

    /// Number of real coordinates a homomorphism `G → ℝ` is determined by:
    /// one per free abelian coordinate or free letter, none for finite factors.
    pub fn hom_rank(&self) -> usize {
        match self {
            GroupModel::Cyclic(_) | GroupModel::Finite(_) => 0,
            GroupModel::FreeAbelian(d) => *d,
            GroupModel::Free(r) => *r,
            GroupModel::Product(l, r) => l.hom_rank() + r.hom_rank(),
        }
    }

    /// Image of `x` under abelianization modulo torsion, as integer coordinates
    /// matching [`GroupModel::hom_rank`].
    pub fn hom_coordinates(&self, x: &GroupElement) -> Vec<i64> {
        match (self, x) {
            (GroupModel::FreeAbelian(_), GroupElement::Vector(v)) => v.clone(),
            (GroupModel::Free(r), GroupElement::Word(w)) => {
                let mut c = vec![0; *r];
                for &l in w {
                    c[l.unsigned_abs() as usize - 1] += l.signum() as i64;
                }
                c
            }
            (GroupModel::Product(l, r), GroupElement::Pair(a, b)) => {
                let mut c = l.hom_coordinates(a);
                c.extend(r.hom_coordinates(b));
                c
            }
            _ => Vec::new(),
        }
    }

    /// Human-readable label; round-trips through [`GroupModel::parse_element`].
    pub fn label(&self, x: &GroupElement) -> String {
        match (self, x) {
            (GroupModel::Finite(t), GroupElement::Index(k)) if *k < t.order() => t.labels[*k].clone(),
            (GroupModel::Cyclic(_), GroupElement::Index(k)) => k.to_string(),
            (GroupModel::FreeAbelian(1), GroupElement::Vector(v)) => v[0].to_string(),
            (GroupModel::FreeAbelian(_), GroupElement::Vector(v)) => format!(
                "({})",
                v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            ),
            (GroupModel::Free(_), GroupElement::Word(w)) => {
                if w.is_empty() {
                    "e".to_string()
                } else {
                    w.iter().map(|&l| letter_char(l)).collect()
                }
            }
            (GroupModel::Product(l, r), GroupElement::Pair(a, b)) => {
                format!("[{};{}]", l.label(a), r.label(b))
            }
            _ => format!("{x:?}"),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        let s = text.trim();
        let bad = || GroupError::ParseElement(text.to_string());
        let x = match self {
            GroupModel::Cyclic(n) => {
                let k: i64 = s.parse().map_err(|_| bad())?;
                GroupElement::Index(k.rem_euclid(*n as i64) as usize)
            }
            GroupModel::Finite(t) => match t.labels.iter().position(|l| l == s) {
                Some(k) => GroupElement::Index(k),
                None => GroupElement::Index(s.parse().map_err(|_| bad())?),
            },
            GroupModel::FreeAbelian(d) => {
                let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
                let coords = if inner.is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                        .collect::<Result<Vec<_>, _>>()?
                };
                if coords.len() != *d {
                    return Err(bad());
                }
                GroupElement::Vector(coords)
            }
            GroupModel::Free(_) => {
                if s == "e" || s.is_empty() {
                    GroupElement::Word(Vec::new())
                } else {
                    let letters = s.chars().map(|c| letter_value(c).ok_or_else(bad)).collect::<Result<Vec<_>, _>>()?;
                    let id = self.identity();
                    letters.into_iter().fold(id, |acc, l| self.multiply(&acc, &GroupElement::Word(vec![l])))
                }
            }
            GroupModel::Product(l, r) => {
                let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
                let (a, b) = split_top_level(inner, ';').ok_or_else(bad)?;
                GroupElement::pair(l.parse_element(a)?, r.parse_element(b)?)
            }
        };
        if self.contains(&x) {
            Ok(x)
        } else {
            Err(bad())
        }
    }

    /// Splits a comma-separated element list, respecting parentheses and brackets.
    pub fn parse_element_list(&self, text: &str) -> Result<Vec<GroupElement>, GroupError> {
        split_list(text).into_iter().map(|s| self.parse_element(&s)).collect()
    }

    /// Whether every pair of the given elements commutes.
    pub fn commute(&self, a: &GroupElement, b: &GroupElement) -> bool {
        self.multiply(a, b) == self.multiply(b, a)
    }

    pub fn is_abelian(&self) -> Option<bool> {
        match self {
            GroupModel::Cyclic(_) | GroupModel::FreeAbelian(_) => Some(true),
            GroupModel::Free(r) => Some(*r <= 1),
            GroupModel::Finite(_) => {
                let gens = self.canonical_generators();
                Some(gens.iter().all(|a| gens.iter().all(|b| self.commute(a, b))))
            }
            GroupModel::Product(l, r) => Some(l.is_abelian()? && r.is_abelian()?),
        }
    }

    /// A short description of the group kind, used in reports.
    pub fn describe(&self) -> String {
        match self {
            GroupModel::Cyclic(n) => format!("Z/{n}"),
            GroupModel::FreeAbelian(1) => "Z".to_string(),
            GroupModel::FreeAbelian(d) => format!("Z^{d}"),
            GroupModel::Free(r) => format!("F{r}"),
            GroupModel::Finite(t) => format!("table(order {})", t.order()),
            GroupModel::Product(l, r) => format!("{} x {}", l.describe(), r.describe()),
        }
    }

    /// Draws a uniformly random element of a finite group.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Option<GroupElement> {
        let n = self.order()?;
        Some(self.element_at(rng.gen_range(0..n)))
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn letter_char(l: i32) -> char {
    let base = (l.unsigned_abs() - 1) as u8;
    if l > 0 {
        (b'a' + base) as char
    } else {
        (b'A' + base) as char
    }
}

fn letter_value(c: char) -> Option<i32> {
    match c {
        'a'..='z' => Some((c as u8 - b'a') as i32 + 1),
        'A'..='Z' => Some(-((c as u8 - b'A') as i32 + 1)),
        _ => None,
    }
}

fn split_top_level(s: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => {
                depth += 1;
                cur.push(c);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(c);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur);
    }
    out.into_iter().map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}
