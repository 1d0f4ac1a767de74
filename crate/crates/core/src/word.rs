//! Free-group elements as freely reduced words: letters, alphabets, free
//! reduction, multiplication, conjugation and cancellation accounting.
//!
//! Words are immutable after construction and always freely reduced; the
//! empty word is the group identity. The letter order used everywhere for
//! tie-breaking and shortlex enumeration is `a < a⁻¹ < b < b⁻¹ < …`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// A generator or its formal inverse. Ordering is `(generator, sign)` with
/// the positive letter first, which pins down the global letter order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    gen: u16,
    inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter {
            gen: u16::try_from(gen).expect("generator index out of range"),
            inv,
        }
    }

    /// 0-based generator index.
    pub fn gen(self) -> usize {
        self.gen as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inv
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    /// Rank of this letter in the fixed letter order: `a = 0, a⁻¹ = 1, b = 2, …`.
    pub fn order_index(self) -> usize {
        2 * self.gen as usize + usize::from(self.inv)
    }
}

/// Errors from parsing the text word format.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseWordError {
    #[error("unexpected character {0:?}")]
    BadSymbol(char),
    #[error("generator {0} exceeds alphabet rank {1}")]
    RankExceeded(usize, usize),
    #[error("malformed exponent")]
    BadExponent,
    #[error("exponent without a preceding letter")]
    DanglingExponent,
}

/// A free-group basis: a rank together with distinct printable generator names.
///
/// Ranks up to 26 use the names `a, b, c, …`; larger ranks use indexed names
/// `x1, x2, …`. The text format writes inverses with the uppercase form
/// (`A = a⁻¹`, `X3 = x3⁻¹`), accepts caret powers (`a^-3` ≡ `AAA`), and spells
/// the identity as `1` or the empty string.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Standard alphabet of the given rank.
    pub fn with_rank(rank: usize) -> Self {
        assert!(rank >= 1, "alphabet rank must be at least 1");
        let names = if rank <= 26 {
            (0..rank)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect()
        } else {
            (1..=rank).map(|i| format!("x{i}")).collect()
        };
        Alphabet { names }
    }

    /// Alphabet with names `<prefix>1 … <prefix>r`, used for derived
    /// generating sets (e.g. words over a Nielsen basis).
    pub fn prefixed(prefix: char, rank: usize) -> Self {
        assert!(rank >= 1, "alphabet rank must be at least 1");
        assert!(prefix.is_ascii_lowercase());
        Alphabet {
            names: (1..=rank).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// Name of a letter; inverses are rendered by uppercasing the leading char.
    pub fn name(&self, letter: Letter) -> String {
        let base = &self.names[letter.gen()];
        if letter.is_inverse() {
            let mut s = base.clone();
            let head = s.remove(0).to_ascii_uppercase();
            format!("{head}{s}")
        } else {
            base.clone()
        }
    }

    /// All `2·rank` letters in the fixed order `a, a⁻¹, b, b⁻¹, …`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.rank()).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
    }

    /// Number of freely reduced words of length at most `radius`.
    ///
    /// Closed form `1 + 2m((2m−1)^r − 1)/(2m−2)` for rank `m ≥ 2` and
    /// `2r + 1` for rank 1.
    pub fn ball_size(&self, radius: usize) -> u64 {
        let m = self.rank() as u64;
        if m == 1 {
            return 2 * radius as u64 + 1;
        }
        let q = 2 * m - 1;
        let mut total = 1u64;
        let mut sphere = 2 * m;
        for _ in 0..radius {
            total = total.checked_add(sphere).expect("ball size overflows u64");
            sphere = sphere.checked_mul(q).expect("ball size overflows u64");
        }
        total
    }

    pub fn parse_word(&self, input: &str) -> Result<Word, ParseWordError> {
        let s = input.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let mut letters: Vec<Letter> = Vec::new();
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '^' {
                i += 1;
                let mut sign = 1i64;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    if chars[i] == '-' {
                        sign = -1;
                    }
                    i += 1;
                }
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(ParseWordError::BadExponent);
                }
                let mag: i64 = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| ParseWordError::BadExponent)?;
                let base = letters.pop().ok_or(ParseWordError::DanglingExponent)?;
                let e = sign * mag;
                let l = if e < 0 { base.inverse() } else { base };
                for _ in 0..e.unsigned_abs() {
                    letters.push(l);
                }
                continue;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let (letter, consumed) = self.parse_letter(&chars[i..])?;
            letters.push(letter);
            i += consumed;
        }
        Ok(Word::reduce(letters))
    }

    fn parse_letter(&self, chars: &[char]) -> Result<(Letter, usize), ParseWordError> {
        let c = chars[0];
        if !c.is_ascii_alphabetic() {
            return Err(ParseWordError::BadSymbol(c));
        }
        let inv = c.is_ascii_uppercase();
        let lower = c.to_ascii_lowercase();
        // Indexed names: a lowercase prefix followed by digits.
        let mut digits = 0;
        while 1 + digits < chars.len() && chars[1 + digits].is_ascii_digit() {
            digits += 1;
        }
        if digits > 0 {
            let name: String = std::iter::once(lower)
                .chain(chars[1..1 + digits].iter().copied())
                .collect();
            if let Some(g) = self.names.iter().position(|n| *n == name) {
                return Ok((Letter::new(g, inv), 1 + digits));
            }
            return Err(ParseWordError::BadSymbol(c));
        }
        let name = lower.to_string();
        match self.names.iter().position(|n| *n == name) {
            Some(g) => Ok((Letter::new(g, inv), 1)),
            None => {
                if self.rank() <= 26 && lower.is_ascii_lowercase() {
                    let idx = (lower as u8 - b'a') as usize;
                    Err(ParseWordError::RankExceeded(idx + 1, self.rank()))
                } else {
                    Err(ParseWordError::BadSymbol(c))
                }
            }
        }
    }

    /// Plain-letter rendering of a word; the identity prints as `1`.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        w.letters().iter().map(|&l| self.name(l)).collect()
    }
}

/// A freely reduced word over some alphabet. Equality is letter-sequence
/// equality; the alphabet itself is carried separately. The derived ordering
/// is plain lexicographic (fine for sets and maps); use
/// [`Word::shortlex_cmp`] where shortlex order matters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn single(letter: Letter) -> Self {
        Word {
            letters: vec![letter],
        }
    }

    /// Freely reduce an arbitrary letter sequence.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// Wrap an already-reduced letter sequence.
    pub fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(is_reduced(&letters), "sequence is not freely reduced");
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Reduced product `self · rhs`. Only the seam can cancel when both
    /// factors are reduced, so this is a single scan.
    pub fn multiply(&self, rhs: &Word) -> Word {
        let mut t = 0;
        let n = self.len().min(rhs.len());
        while t < n && self.letters[self.len() - 1 - t] == rhs.letters[t].inverse() {
            t += 1;
        }
        let mut letters = Vec::with_capacity(self.len() + rhs.len() - 2 * t);
        letters.extend_from_slice(&self.letters[..self.len() - t]);
        letters.extend_from_slice(&rhs.letters[t..]);
        Word { letters }
    }

    /// Reduced product of several factors, left to right.
    pub fn product(factors: &[Word]) -> Word {
        factors
            .iter()
            .fold(Word::identity(), |acc, w| acc.multiply(w))
    }

    /// Conjugate `g⁻¹ · self · g`; this orientation is fixed system-wide.
    pub fn conjugate(&self, g: &Word) -> Word {
        g.inverse().multiply(self).multiply(g)
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// The subword at `range` (a word, since subwords of reduced words are reduced).
    pub fn subword(&self, range: std::ops::Range<usize>) -> Word {
        Word {
            letters: self.letters[range].to_vec(),
        }
    }

    /// Shortlex comparison under the fixed letter order.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| {
                for (x, y) in self.letters.iter().zip(&other.letters) {
                    let c = x.order_index().cmp(&y.order_index());
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            })
    }
}

impl fmt::Display for Word {
    /// Display assuming single-char names (rank ≤ 26); use
    /// [`Alphabet::format_word`] otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for l in &self.letters {
            let c = (b'a' + l.gen() as u8) as char;
            let c = if l.is_inverse() {
                c.to_ascii_uppercase()
            } else {
                c
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0] != w[1].inverse())
}

/// Total amount of cancellation in the product of the given factors:
/// `½(Σ lengths − length of product)`. Always a nonnegative integer on
/// reduced inputs; the two-factor case is the Gromov–Lyndon product
/// `(a₁, a₂⁻¹)`.
pub fn cn(factors: &[Word]) -> usize {
    assert!(!factors.is_empty(), "cn needs at least one factor");
    let total: usize = factors.iter().map(Word::len).sum();
    let product = Word::product(factors);
    let deficit = total - product.len();
    debug_assert!(deficit.is_multiple_of(2), "length deficit must be even");
    deficit / 2
}

/// Reduce the concatenation of `factors` while tracking which letter
/// occurrences survive. Returns the reduced word and, per factor, a survival
/// mask aligned with its letters. Free reduction cancels a well-defined set
/// of occurrences, so the masks do not depend on association order.
pub fn reduce_with_survivors(factors: &[&Word]) -> (Word, Vec<Vec<bool>>) {
    let mut masks: Vec<Vec<bool>> = factors.iter().map(|w| vec![false; w.len()]).collect();
    let mut stack: Vec<(Letter, usize, usize)> = Vec::new();
    for (fi, w) in factors.iter().enumerate() {
        for (pi, &l) in w.letters().iter().enumerate() {
            if let Some(&(top, _, _)) = stack.last() {
                if top == l.inverse() {
                    stack.pop();
                    continue;
                }
            }
            stack.push((l, fi, pi));
        }
    }
    let mut letters = Vec::with_capacity(stack.len());
    for (l, fi, pi) in stack {
        masks[fi][pi] = true;
        letters.push(l);
    }
    (Word::from_reduced(letters), masks)
}
