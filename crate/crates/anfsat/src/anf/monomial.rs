use std::cmp::Ordering;

use smallvec::SmallVec;

/// A product of distinct variables, stored as a bitset (bit `i - 1` set when
/// `α_i` occurs). The empty set is the constant monomial `1`.
///
/// Ordering is by degree, then by the ascending index sequence compared
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    bits: SmallVec<[u64; 1]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            bits: SmallVec::new(),
        }
    }

    pub fn var(i: u32) -> Self {
        assert!(i >= 1, "variable indices start at 1");
        let k = (i - 1) as usize;
        let mut bits: SmallVec<[u64; 1]> = SmallVec::from_elem(0, k / 64 + 1);
        bits[k / 64] = 1 << (k % 64);
        Monomial { bits }
    }

    pub fn from_vars<I: IntoIterator<Item = u32>>(vars: I) -> Self {
        let mut m = Monomial::one();
        for v in vars {
            m = m.union(&Monomial::var(v));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    pub fn contains(&self, i: u32) -> bool {
        if i == 0 {
            return false;
        }
        let k = (i - 1) as usize;
        self.bits.get(k / 64).is_some_and(|w| w >> (k % 64) & 1 == 1)
    }

    /// Variables in ascending order.
    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + b + 1)
            })
        })
    }

    pub fn max_var(&self) -> Option<u32> {
        let last = *self.bits.last()?;
        Some((self.bits.len() as u32 - 1) * 64 + 64 - last.leading_zeros())
    }

    pub fn union(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.bits.len() >= other.bits.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut bits = long.bits.clone();
        for (w, s) in bits.iter_mut().zip(short.bits.iter()) {
            *w |= s;
        }
        Monomial { bits }
    }

    pub fn without(&self, i: u32) -> Monomial {
        let mut out = self.clone();
        if self.contains(i) {
            let k = (i - 1) as usize;
            out.bits[k / 64] &= !(1 << (k % 64));
            while out.bits.last() == Some(&0) {
                out.bits.pop();
            }
        }
        out
    }

    /// True when every variable of the monomial is set in the packed assignment.
    pub fn is_satisfied_by(&self, words: &[u64]) -> bool {
        self.bits
            .iter()
            .enumerate()
            .all(|(i, &w)| w & words.get(i).copied().unwrap_or(0) == w)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let n = self.bits.len().max(other.bits.len());
        for i in 0..n {
            let a = self.bits.get(i).copied().unwrap_or(0);
            let b = other.bits.get(i).copied().unwrap_or(0);
            let x = a ^ b;
            if x != 0 {
                // Equal degree: whoever holds the lowest differing index is smaller.
                let low = x & x.wrapping_neg();
                return if a & low != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
