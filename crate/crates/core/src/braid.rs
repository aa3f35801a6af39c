//! Pure braid words, shifted plats and the position of the surgery unknot.
//!
//! Concrete syntax for a word is a header `n=<int>` followed by
//! whitespace-separated syllables `a(i,j)^k`, where `a(i,j)` is the full
//! twist of strands `i < j` and a missing exponent means `1`. Input files add
//! a `p=<int>` header for the surgery coefficient.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed syllable `{0}`")]
    MalformedSyllable(String),
    #[error("strand pair ({i},{j}) out of range for {strands} strands")]
    StrandOutOfRange { i: usize, j: usize, strands: usize },
    #[error("syllable `{0}` has exponent zero")]
    ZeroExponent(String),
    #[error("missing header `{0}=<int>`")]
    MissingHeader(&'static str),
    #[error("bad header `{0}`")]
    BadHeader(String),
}

/// One syllable `A_{ij}^exp` of a pure braid word, strands 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub i: usize,
    pub j: usize,
    pub exp: i32,
}

impl Syllable {
    pub fn new(i: usize, j: usize, exp: i32) -> Self {
        Syllable { i, j, exp }
    }

    pub fn is_unit(&self) -> bool {
        self.exp.abs() == 1
    }

    /// Sign of the twist, `+1` for right-handed.
    pub fn sign(&self) -> i32 {
        self.exp.signum()
    }

    fn check(&self, strands: usize, token: &str) -> Result<(), ParseError> {
        if self.i == 0 || self.i >= self.j || self.j > strands {
            return Err(ParseError::StrandOutOfRange { i: self.i, j: self.j, strands });
        }
        if self.exp == 0 {
            return Err(ParseError::ZeroExponent(token.to_string()));
        }
        Ok(())
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a({},{})", self.i, self.j)?;
        if self.exp != 1 {
            write!(f, "^{}", self.exp)?;
        }
        Ok(())
    }
}

fn parse_syllable(token: &str) -> Result<Syllable, ParseError> {
    let bad = || ParseError::MalformedSyllable(token.to_string());
    let rest = token.strip_prefix("a(").ok_or_else(bad)?;
    let close = rest.find(')').ok_or_else(bad)?;
    let (pair, tail) = (&rest[..close], &rest[close + 1..]);
    let (i, j) = pair.split_once(',').ok_or_else(bad)?;
    let i = i.trim().parse::<usize>().map_err(|_| bad())?;
    let j = j.trim().parse::<usize>().map_err(|_| bad())?;
    let exp = if tail.is_empty() {
        1
    } else {
        tail.strip_prefix('^')
            .ok_or_else(bad)?
            .parse::<i32>()
            .map_err(|_| bad())?
    };
    Ok(Syllable { i, j, exp })
}

/// A word in the pure braid group on `2n` strands. The empty word is the
/// trivial braid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PureBraidWord {
    n: usize,
    syllables: Vec<Syllable>,
}

impl PureBraidWord {
    pub fn new(n: usize, syllables: Vec<Syllable>) -> Result<Self, ParseError> {
        if n == 0 {
            return Err(ParseError::BadHeader("n=0".into()));
        }
        for s in &syllables {
            s.check(2 * n, &s.to_string())?;
        }
        Ok(PureBraidWord { n, syllables })
    }

    pub fn trivial(n: usize) -> Self {
        assert!(n > 0, "a plat needs at least one strand pair");
        PureBraidWord { n, syllables: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strands(&self) -> usize {
        2 * self.n
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Rewrites every `A^k` as `|k|` copies of `A^{sign k}`.
    pub fn unit_expansion(&self) -> Vec<Syllable> {
        self.syllables
            .iter()
            .flat_map(|s| {
                std::iter::repeat_n(Syllable { exp: s.sign(), ..*s }, s.exp.unsigned_abs() as usize)
            })
            .collect()
    }

    /// The syllables without the `n=` header.
    pub fn render_syllables(&self) -> String {
        self.syllables
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for PureBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        for s in &self.syllables {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

impl FromStr for PureBraidWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

fn parse_header(token: Option<&str>, key: &'static str) -> Result<u64, ParseError> {
    let token = token.ok_or(ParseError::MissingHeader(key))?;
    let value = token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or(ParseError::MissingHeader(key))?;
    value
        .parse::<u64>()
        .map_err(|_| ParseError::BadHeader(token.to_string()))
}

fn parse_syllables<'a>(n: usize, tokens: impl Iterator<Item = &'a str>) -> Result<PureBraidWord, ParseError> {
    let mut syllables = Vec::new();
    for token in tokens {
        let s = parse_syllable(token)?;
        s.check(2 * n, token)?;
        syllables.push(s);
    }
    Ok(PureBraidWord { n, syllables })
}

fn parse_n(token: Option<&str>) -> Result<usize, ParseError> {
    match parse_header(token, "n")? {
        0 => Err(ParseError::BadHeader("n=0".into())),
        n => usize::try_from(n).map_err(|_| ParseError::BadHeader(format!("n={n}"))),
    }
}

/// Parses `n=<int>` followed by syllables.
pub fn parse_word(text: &str) -> Result<PureBraidWord, ParseError> {
    let mut tokens = text.split_whitespace();
    let n = parse_n(tokens.next())?;
    parse_syllables(n, tokens)
}

/// Parses syllables only, for callers that supply `n` separately.
pub fn parse_syllables_for(n: usize, text: &str) -> Result<PureBraidWord, ParseError> {
    if n == 0 {
        return Err(ParseError::BadHeader("n=0".into()));
    }
    parse_syllables(n, text.split_whitespace())
}

/// A knot or link in `L(p,1)` (or `S^1 x S^2` when `p = 0`) given as the
/// shifted plat closure of a pure braid, with `U` framed `-p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlatInput {
    pub word: PureBraidWord,
    pub p: u32,
}

impl PlatInput {
    pub fn new(word: PureBraidWord, p: u32) -> Self {
        PlatInput { word, p }
    }

    pub fn n(&self) -> usize {
        self.word.n()
    }

    pub fn is_sphere_product(&self) -> bool {
        self.p == 0
    }

    /// Strand sets of the plat components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        plat_components(self.n())
    }

    /// Parses the file format: `n=<int> p=<int>` then syllables.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut tokens = text.split_whitespace();
        let n = parse_n(tokens.next())?;
        let p = parse_header(tokens.next(), "p")?;
        let p = u32::try_from(p).map_err(|_| ParseError::BadHeader(format!("p={p}")))?;
        Ok(PlatInput { word: parse_syllables(n, tokens)?, p })
    }
}

impl fmt::Display for PlatInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} p={}", self.word.n(), self.p)?;
        for s in self.word.syllables() {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// A cap joining two strand endpoints.
pub type Cap = (usize, usize);

/// Cap pairs of the shifted `2n`-plat: `(top, bottom)`.
///
/// Top caps join `(1,2),(3,4),..,(2n-1,2n)`; bottom caps join
/// `(2,3),..,(2n-2,2n-1)` and the closure arc `(2n,1)`.
pub fn shifted_plat_caps(n: usize) -> (Vec<Cap>, Vec<Cap>) {
    let top = (0..n).map(|k| (2 * k + 1, 2 * k + 2)).collect();
    let mut bottom: Vec<_> = (1..n).map(|k| (2 * k, 2 * k + 1)).collect();
    bottom.push((2 * n, 1));
    (top, bottom)
}

/// Components of the shifted plat closure of a pure braid. A pure braid
/// returns every strand to its own position, so components are the cycles of
/// the cap graph.
pub fn plat_components(n: usize) -> Vec<Vec<usize>> {
    let strands = 2 * n;
    let mut parent: Vec<usize> = (0..=strands).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut x = x;
        while parent[x] != root {
            let next = parent[x];
            parent[x] = root;
            x = next;
        }
        root
    }
    let (top, bottom) = shifted_plat_caps(n);
    for (a, b) in top.into_iter().chain(bottom) {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; strands + 1];
    for s in 1..=strands {
        let r = find(&mut parent, s);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(s);
    }
    groups
}

/// One factor `A_{strand, U}` of the axis decomposition of `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxisGenerator {
    pub strand: usize,
    pub sign: i32,
}

/// Position of the surgery unknot relative to the plat strands, as the
/// ordered list of pair generators `A_{i,U}` it contributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisDecomposition {
    pub n: usize,
    pub generators: Vec<AxisGenerator>,
}

impl AxisDecomposition {
    pub fn encircled(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.strand).collect()
    }
}

/// `U` as a braid axis: it runs once around every strand, so its pure braid
/// expansion is `A_{1,U} A_{2,U} .. A_{2n,U}`.
pub fn u_decomposition(n: usize) -> AxisDecomposition {
    assert!(n > 0, "a plat needs at least one strand pair");
    AxisDecomposition {
        n,
        generators: (1..=2 * n).map(|strand| AxisGenerator { strand, sign: 1 }).collect(),
    }
}
