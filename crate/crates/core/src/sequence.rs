//! Sequences over a group, held as multisets (element -> multiplicity).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{units, Group, GroupElement};

/// A finite multiset of group elements. Order is irrelevant; all
/// multiplicities stored are positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequence {
    group: Group,
    counts: BTreeMap<GroupElement, usize>,
    length: usize,
    total: GroupElement,
}

impl Sequence {
    pub fn empty(group: Group) -> Self {
        let total = group.identity();
        Self {
            group,
            counts: BTreeMap::new(),
            length: 0,
            total,
        }
    }

    /// Builds from (element, multiplicity) pairs. Repeated elements merge;
    /// zero multiplicities are dropped.
    pub fn from_counts<I>(group: Group, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, usize)>,
    {
        let mut seq = Self::empty(group);
        for (e, m) in counts {
            seq.insert(e, m)?;
        }
        Ok(seq)
    }

    pub fn from_elements<I>(group: Group, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        Self::from_counts(group, elements.into_iter().map(|e| (e, 1)))
    }

    /// Convenience for tests and constructions: rank-any coordinates with
    /// multiplicities.
    pub fn from_coords(group: Group, counts: &[(&[u64], usize)]) -> Result<Self> {
        let items = counts
            .iter()
            .map(|(c, m)| Ok((group.element(c.to_vec())?, *m)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_counts(group, items)
    }

    pub(crate) fn insert(&mut self, e: GroupElement, m: usize) -> Result<()> {
        if !self.group.contains(&e) {
            self.group.element(e.coords().to_vec())?;
        }
        if m == 0 {
            return Ok(());
        }
        self.total = self
            .group
            .add_unchecked(&self.total, &self.group.scale_unchecked(&e, m as i64));
        self.length += m;
        *self.counts.entry(e).or_insert(0) += m;
        Ok(())
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn counts(&self) -> &BTreeMap<GroupElement, usize> {
        &self.counts
    }

    pub fn multiplicity(&self, e: &GroupElement) -> usize {
        self.counts.get(e).copied().unwrap_or(0)
    }

    /// `|J|`, the number of terms counted with multiplicity.
    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn total_sum(&self) -> &GroupElement {
        &self.total
    }

    pub fn is_zero_sum(&self) -> bool {
        self.total.coords().iter().all(|&c| c == 0)
    }

    /// Terms in ascending element order, repeated by multiplicity.
    pub fn expand(&self) -> Vec<GroupElement> {
        self.counts
            .iter()
            .flat_map(|(e, &m)| std::iter::repeat(e.clone()).take(m))
            .collect()
    }

    pub fn contains_multiset(&self, other: &Sequence) -> bool {
        self.group == other.group
            && other
                .counts
                .iter()
                .all(|(e, &m)| self.multiplicity(e) >= m)
    }

    /// Adds `c` to every term.
    pub fn shift_all(&self, c: &GroupElement) -> Result<Sequence> {
        if !self.group.contains(c) {
            self.group.element(c.coords().to_vec())?;
        }
        Sequence::from_counts(
            self.group.clone(),
            self.counts
                .iter()
                .map(|(e, &m)| (self.group.add_unchecked(e, c), m)),
        )
    }

    /// Multiset difference; fails unless `sub` is contained in `self`.
    pub fn remove(&self, sub: &Sequence) -> Result<Sequence> {
        if self.group != sub.group {
            return Err(Error::DimensionMismatch {
                expected: self.group.rank(),
                found: sub.group.rank(),
            });
        }
        if !self.contains_multiset(sub) {
            return Err(Error::Containment);
        }
        let mut counts = self.counts.clone();
        for (e, &m) in &sub.counts {
            let slot = counts.get_mut(e).expect("containment checked");
            *slot -= m;
            if *slot == 0 {
                counts.remove(e);
            }
        }
        Sequence::from_counts(self.group.clone(), counts)
    }

    pub fn remove_witness(&self, w: &Witness) -> Result<Sequence> {
        self.remove(w.as_sequence())
    }

    pub fn union(&self, other: &Sequence) -> Result<Sequence> {
        if self.group != other.group {
            return Err(Error::DimensionMismatch {
                expected: self.group.rank(),
                found: other.group.rank(),
            });
        }
        let mut out = self.clone();
        for (e, &m) in &other.counts {
            out.insert(e.clone(), m)?;
        }
        Ok(out)
    }

    /// Sorted (coords, multiplicity) list; the ordering key for canonical forms.
    pub fn sorted_counts(&self) -> Vec<(Vec<u64>, usize)> {
        self.counts
            .iter()
            .map(|(e, &m)| (e.coords().to_vec(), m))
            .collect()
    }

    /// Orbit representative under coordinatewise unit scaling combined with
    /// permutations of coordinates that share a modulus. The least
    /// [`Sequence::sorted_counts`] in the orbit wins.
    pub fn canonicalize(&self) -> Sequence {
        let autos = Automorphisms::new(&self.group);
        let mut best = self.sorted_counts();
        let mut best_seq = None;
        autos.for_each(|scales, perm| {
            let mut image: Vec<(Vec<u64>, usize)> = self
                .counts
                .iter()
                .map(|(e, &m)| (autos.apply(e.coords(), scales, perm), m))
                .collect();
            image.sort_unstable();
            if image < best {
                best = image;
                best_seq = Some(());
            }
        });
        match best_seq {
            None => self.clone(),
            Some(()) => Sequence::from_counts(
                self.group.clone(),
                best.into_iter()
                    .map(|(c, m)| (GroupElement::from_raw(c), m)),
            )
            .expect("automorphism images stay in the group"),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize() == *self
    }

    /// Body of the text format, without the `<group>:` prefix.
    pub fn body_text(&self) -> String {
        let mut out = String::new();
        for (i, (e, &m)) in self.counts.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&e.to_string());
            if m != 1 {
                out.push('^');
                out.push_str(&m.to_string());
            }
        }
        out
    }

    /// `<group>: <elem>^<mult> ...` with `^1` omitted.
    pub fn to_text(&self) -> String {
        if self.is_empty() {
            format!("{}:", self.group)
        } else {
            format!("{}: {}", self.group, self.body_text())
        }
    }

    /// Parses `<group>: <body>`.
    pub fn parse(text: &str, lenient: bool) -> Result<Sequence> {
        let (g, body) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in {text:?}")))?;
        let group: Group = g.parse()?;
        Self::parse_body(&group, body, lenient)
    }

    /// Parses a whitespace-separated list of `<elem>[^<mult>]` tokens.
    /// Strict mode rejects unreduced residues; lenient mode reduces them.
    pub fn parse_body(group: &Group, body: &str, lenient: bool) -> Result<Sequence> {
        let mut parser = BodyParser {
            chars: body.chars().collect(),
            pos: 0,
        };
        let mut seq = Sequence::empty(group.clone());
        loop {
            parser.skip_ws();
            if parser.at_end() {
                break;
            }
            let raw = parser.element()?;
            parser.skip_ws();
            let mult = if parser.eat('^') {
                parser.skip_ws();
                let m = parser.integer()?;
                if m <= 0 {
                    return Err(Error::Parse(format!("multiplicity must be positive, got {m}")));
                }
                m as usize
            } else {
                1
            };
            let element = if lenient {
                group.reduce(&raw)?
            } else {
                if let Some(&neg) = raw.iter().find(|&&c| c < 0) {
                    return Err(Error::OutOfRange {
                        value: neg,
                        modulus: group.moduli()[raw.iter().position(|&c| c == neg).unwrap()],
                    });
                }
                let coords: Vec<u64> = raw.iter().map(|&c| c as u64).collect();
                group.element(coords)?
            };
            seq.insert(element, mult)?;
        }
        Ok(seq)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("sequence serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Sequence> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    moduli: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct SequenceJson {
    group: GroupJson,
    counts: Vec<(Vec<u64>, usize)>,
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SequenceJson {
            group: GroupJson {
                moduli: self.group.moduli().to_vec(),
            },
            counts: self.sorted_counts(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SequenceJson::deserialize(deserializer)?;
        let group = Group::new(raw.group.moduli).map_err(D::Error::custom)?;
        let mut seq = Sequence::empty(group.clone());
        for (coords, m) in raw.counts {
            if m == 0 {
                return Err(D::Error::custom("multiplicity must be positive"));
            }
            let e = group.element(coords).map_err(D::Error::custom)?;
            seq.insert(e, m).map_err(D::Error::custom)?;
        }
        Ok(seq)
    }
}

struct BodyParser {
    chars: Vec<char>,
    pos: usize,
}

impl BodyParser {
    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i128> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| {
            Error::Parse(format!(
                "expected integer at offset {start}, found {:?}",
                self.peek().map(String::from).unwrap_or_default()
            ))
        })
    }

    fn element(&mut self) -> Result<Vec<i128>> {
        if self.eat('(') {
            let mut coords = Vec::new();
            loop {
                self.skip_ws();
                coords.push(self.integer()?);
                self.skip_ws();
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return Err(Error::Parse(format!(
                        "expected ',' or ')' at offset {}",
                        self.pos
                    )));
                }
            }
            Ok(coords)
        } else {
            Ok(vec![self.integer()?])
        }
    }
}

/// The automorphism subgroup used for canonical forms.
struct Automorphisms {
    moduli: Vec<u64>,
    unit_choices: Vec<Vec<u64>>,
    perms: Vec<Vec<usize>>,
}

impl Automorphisms {
    fn new(group: &Group) -> Self {
        let moduli = group.moduli().to_vec();
        let unit_choices = moduli.iter().map(|&m| units(m)).collect();
        let mut perms = Vec::new();
        let mut current = Vec::with_capacity(moduli.len());
        let mut used = vec![false; moduli.len()];
        Self::perms_rec(&moduli, &mut current, &mut used, &mut perms);
        Self {
            moduli,
            unit_choices,
            perms,
        }
    }

    fn perms_rec(
        moduli: &[u64],
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = current.len();
        if i == moduli.len() {
            out.push(current.clone());
            return;
        }
        for j in 0..moduli.len() {
            if !used[j] && moduli[j] == moduli[i] {
                used[j] = true;
                current.push(j);
                Self::perms_rec(moduli, current, used, out);
                current.pop();
                used[j] = false;
            }
        }
    }

    /// Coordinate `i` of the image is `scales[i] * coords[perm[i]]`.
    fn apply(&self, coords: &[u64], scales: &[u64], perm: &[usize]) -> Vec<u64> {
        (0..coords.len())
            .map(|i| {
                let m = self.moduli[i];
                ((scales[i] as u128 * coords[perm[i]] as u128) % m as u128) as u64
            })
            .collect()
    }

    fn for_each<F: FnMut(&[u64], &[usize])>(&self, mut f: F) {
        let r = self.moduli.len();
        let mut idx = vec![0usize; r];
        let mut scales: Vec<u64> = self.unit_choices.iter().map(|u| u[0]).collect();
        loop {
            for perm in &self.perms {
                f(&scales, perm);
            }
            let mut pos = 0;
            loop {
                if pos == r {
                    return;
                }
                idx[pos] += 1;
                if idx[pos] < self.unit_choices[pos].len() {
                    scales[pos] = self.unit_choices[pos][idx[pos]];
                    break;
                }
                idx[pos] = 0;
                scales[pos] = self.unit_choices[pos][0];
                pos += 1;
            }
        }
    }
}

/// A sub-multiset of some parent sequence whose terms sum to the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    inner: Sequence,
}

impl Witness {
    /// Certifies `sub` against `parent`: containment and zero sum.
    pub fn new(parent: &Sequence, sub: Sequence) -> Result<Witness> {
        if !parent.contains_multiset(&sub) {
            return Err(Error::Containment);
        }
        if !sub.is_zero_sum() {
            return Err(Error::NotZeroSum);
        }
        Ok(Witness { inner: sub })
    }

    pub fn empty(group: Group) -> Witness {
        Witness {
            inner: Sequence::empty(group),
        }
    }

    pub fn size(&self) -> usize {
        self.inner.len()
    }

    pub fn as_sequence(&self) -> &Sequence {
        &self.inner
    }

    pub fn into_sequence(self) -> Sequence {
        self.inner
    }

    /// Re-checks the certificate against a parent and a required size.
    pub fn validates(&self, parent: &Sequence, size: usize) -> bool {
        self.size() == size && self.inner.is_zero_sum() && parent.contains_multiset(&self.inner)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.inner.serialize(serializer)
    }
}
