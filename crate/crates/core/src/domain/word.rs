//! Words over a finite alphabet. Symbols are 0-based in memory and 1-based
//! in serialized form.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Per-symbol counts over an alphabet of size `m`.
    pub fn counts(&self, m: usize) -> Vec<usize> {
        let mut c = vec![0usize; m];
        for &s in &self.0 {
            c[s as usize] += 1;
        }
        c
    }

    /// The permuted word whose i-th entry is `self[perm[i]]`.
    pub fn permute(&self, perm: &[usize]) -> Word {
        Word(perm.iter().map(|&i| self.0[i]).collect())
    }

    /// Word with entries at `i` and `j` exchanged.
    pub fn transposed(&self, i: usize, j: usize) -> Word {
        let mut v = self.0.clone();
        v.swap(i, j);
        Word(v)
    }

    /// 1-based digit string for alphabets up to 9 symbols.
    pub fn to_digits(&self) -> String {
        self.0.iter().map(|&s| char::from(b'1' + s)).collect()
    }

    /// Parse a 1-based digit string.
    pub fn from_digits(s: &str) -> Option<Word> {
        let mut v = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c.to_digit(10)?;
            if d == 0 {
                return None;
            }
            v.push((d - 1) as u8);
        }
        Some(Word(v))
    }
}
