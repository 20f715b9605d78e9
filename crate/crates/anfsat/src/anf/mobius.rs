use super::{AnfError, AnfPoly, Monomial};

const MAX_TABLE_VARS: usize = 26;

const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Values of a function on all assignments of an ordered variable list.
/// Point index bit `j` is the value of `vars[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    vars: Vec<u32>,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zeros(vars: &[u32]) -> Result<Self, AnfError> {
        if vars.len() > MAX_TABLE_VARS {
            return Err(AnfError::TableTooLarge(vars.len()));
        }
        let bits = 1usize << vars.len();
        Ok(TruthTable {
            vars: vars.to_vec(),
            words: vec![0; bits.div_ceil(64)],
        })
    }

    pub fn from_fn<F: FnMut(usize) -> bool>(vars: &[u32], mut f: F) -> Result<Self, AnfError> {
        let mut t = Self::zeros(vars)?;
        for p in 0..t.points() {
            if f(p) {
                t.set(p, true);
            }
        }
        Ok(t)
    }

    /// Tabulates `p` over `vars` (sorted ascending, covering the support).
    pub fn from_poly(p: &AnfPoly, vars: &[u32]) -> Result<Self, AnfError> {
        let mut t = Self::zeros(vars)?;
        for m in p.monomials() {
            let mut idx = 0usize;
            for v in m.vars() {
                let j = vars
                    .binary_search(&v)
                    .map_err(|_| AnfError::VariableNotInTable(v))?;
                idx |= 1 << j;
            }
            t.words[idx / 64] ^= 1 << (idx % 64);
        }
        mobius(&mut t.words, vars.len());
        Ok(t)
    }

    /// Converts back to algebraic normal form.
    pub fn to_poly(&self) -> AnfPoly {
        let mut coeffs = self.words.clone();
        mobius(&mut coeffs, self.vars.len());
        let mut terms = Vec::new();
        for (wi, &w) in coeffs.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                let idx = wi * 64 + b;
                terms.push(Monomial::from_vars(
                    (0..self.vars.len())
                        .filter(|j| idx >> j & 1 == 1)
                        .map(|j| self.vars[j]),
                ));
            }
        }
        terms.sort_unstable();
        AnfPoly::from_sorted_unchecked(terms)
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn points(&self) -> usize {
        1 << self.vars.len()
    }

    pub fn get(&self, p: usize) -> bool {
        self.words[p / 64] >> (p % 64) & 1 == 1
    }

    pub fn set(&mut self, p: usize, b: bool) {
        if b {
            self.words[p / 64] |= 1 << (p % 64);
        } else {
            self.words[p / 64] &= !(1 << (p % 64));
        }
    }

    pub fn and_assign(&mut self, other: &TruthTable) {
        debug_assert_eq!(self.vars, other.vars);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// In-place GF(2) Möbius transform over `k` variables. It is an involution, so
/// the same routine maps coefficients to values and values to coefficients.
fn mobius(words: &mut [u64], k: usize) {
    for (i, &mask) in LOW_MASKS.iter().enumerate().take(k.min(6)) {
        let shift = 1u32 << i;
        for w in words.iter_mut() {
            *w ^= (*w & mask) << shift;
        }
    }
    for i in 6..k {
        let stride = 1usize << (i - 6);
        for start in (0..words.len()).step_by(2 * stride) {
            for j in start..start + stride {
                words[j + stride] ^= words[j];
            }
        }
    }
}
