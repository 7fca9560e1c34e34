//! Reduced words in a free group of finite rank.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::GroupError;

/// A freely reduced word. Letter `i > 0` is the `i`-th generator, `-i` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<i8>);

fn letter_key(l: i8) -> u16 {
    2 * (l.unsigned_abs() as u16 - 1) + u16::from(l < 0)
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Reduces `letters` freely.
    pub fn new(letters: impl IntoIterator<Item = i8>) -> Self {
        let mut out: Vec<i8> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 does not exist");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn rank_needed(&self) -> u8 {
        self.0.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Word) -> Word {
        let mut common = 0;
        while common < self.len().min(rhs.len())
            && self.0[self.len() - 1 - common] == -rhs.0[common]
        {
            common += 1;
        }
        let mut out = self.0[..self.len() - common].to_vec();
        out.extend_from_slice(&rhs.0[common..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }
}

/// Shortlex with letters ordered `a < A < b < B < …`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.0
                .iter()
                .map(|&l| letter_key(l))
                .cmp(other.0.iter().map(|&l| letter_key(l)))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.0 {
            let c = (b'a' + l.unsigned_abs() - 1) as char;
            if l < 0 {
                write!(f, "{}", c.to_ascii_uppercase())?;
            } else {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for c in s.chars() {
            let l = match c {
                'a'..='z' => (c as u8 - b'a' + 1) as i8,
                'A'..='Z' => -((c as u8 - b'A' + 1) as i8),
                _ => return Err(GroupError::Input(format!("bad letter `{c}` in word `{s}`"))),
            };
            letters.push(l);
        }
        let w = Word::new(letters.iter().copied());
        if w.0 != letters {
            return Err(GroupError::Input(format!("word `{s}` is not freely reduced")));
        }
        Ok(w)
    }
}

/// All reduced words of length at most `radius` in the free group of rank `rank`, shortlex sorted.
pub fn ball(rank: u8, radius: usize) -> Vec<Word> {
    assert!((1..=26).contains(&rank), "rank must lie in 1..=26");
    let letters: Vec<i8> = (1..=rank as i8).flat_map(|g| [g, -g]).collect();
    let mut out = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.0.last() == Some(&-l) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(rank: u64, radius: u32) -> usize {
        (1 + (1..=radius)
            .map(|m| 2 * rank * (2 * rank - 1).pow(m - 1))
            .sum::<u64>()) as usize
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(2, 0).len(), 1);
        assert_eq!(ball(2, 1).len(), 5);
        assert_eq!(ball(2, 2).len(), 17);
        for rank in 1..=3u8 {
            for radius in 0..=4 {
                assert_eq!(ball(rank, radius).len(), count(rank as u64, radius as u32));
            }
        }
    }

    #[test]
    fn multiplication_reduces() {
        let ab: Word = "ab".parse().unwrap();
        let b_inv_a: Word = "BA".parse().unwrap();
        assert!(ab.mul(&b_inv_a).is_identity());
        assert_eq!(ab.inverse(), b_inv_a);
        assert_eq!(ab.mul(&"Bc".parse().unwrap()).to_string(), "ac");
        assert!("aA".parse::<Word>().is_err());
        let ball2 = ball(2, 2);
        assert_eq!(ball2[0], Word::identity());
        assert_eq!(ball2[1].to_string(), "a");
        assert_eq!(ball2[2].to_string(), "A");
    }
}
