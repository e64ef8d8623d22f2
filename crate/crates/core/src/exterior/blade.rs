use std::fmt;

use crate::error::Error;

/// Largest ambient dimension a [`Blade`] bitmask can index.
pub const MAX_DIM: usize = 32;

/// A canonical basis monomial: a strictly increasing index set stored as a
/// bitmask (bit `i-1` set ⟺ index `i` present). The empty blade is the
/// scalar unit.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Blade(u32);

impl Blade {
    pub const UNIT: Blade = Blade(0);

    pub fn from_bits(bits: u32) -> Self {
        Blade(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The single-index blade for 1-based `index`.
    pub fn generator(index: usize) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&index));
        Blade(1 << (index - 1))
    }

    /// Canonicalizes an index list. Returns the blade together with the
    /// parity of the sorting permutation (`true` = odd), or `None` if an
    /// index repeats (the monomial is zero).
    pub fn from_indices(indices: &[usize]) -> Result<Option<(Blade, bool)>, Error> {
        let mut bits = 0u32;
        let mut odd = false;
        for &i in indices {
            if i == 0 || i > MAX_DIM {
                return Err(Error::Parse(format!("index {i} out of range")));
            }
            let b = 1u32 << (i - 1);
            if bits & b != 0 {
                return Ok(None);
            }
            // indices already placed that are larger than i must be passed
            odd ^= (bits & !((b << 1) - 1)).count_ones() % 2 == 1;
            bits |= b;
        }
        Ok(Some((Blade(bits), odd)))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index >= 1 && index <= MAX_DIM && self.0 & (1 << (index - 1)) != 0
    }

    /// 1-based indices in ascending order.
    pub fn indices(self) -> Vec<usize> {
        (0..MAX_DIM).filter(|k| self.0 & (1 << k) != 0).map(|k| k + 1).collect()
    }

    pub fn max_index(self) -> usize {
        MAX_DIM - self.0.leading_zeros() as usize
    }

    pub fn is_disjoint(self, other: Blade) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Blade) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }

    pub fn without(self, other: Blade) -> Blade {
        Blade(self.0 & !other.0)
    }

    /// The full blade `e_{1…dim}`.
    pub fn top(dim: usize) -> Blade {
        if dim == 32 {
            Blade(u32::MAX)
        } else {
            Blade((1u32 << dim) - 1)
        }
    }

    pub fn complement(self, dim: usize) -> Blade {
        Blade(Blade::top(dim).0 & !self.0)
    }
}

/// Sign of `e_a ∧ e_b` relative to `e_{a∪b}`: `Some(true)` for a minus
/// sign, `None` if the blades overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> Option<bool> {
    if !a.is_disjoint(b) {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b.0;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        // bits of a above this bit of b must be passed over
        swaps += (a.0 & !(low | (low - 1))).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// Sign of contracting the vector blade `v` into the form blade `f`,
/// with `i_{∂_{j1}∧…∧∂_{jp}} = i_{∂_{jp}} ∘ … ∘ i_{∂_{j1}}` (the lowest index
/// contracts first). Returns the remaining blade and `true` for a minus
/// sign, or `None` if `v ⊄ f`.
pub fn contraction_sign(v: Blade, f: Blade) -> Option<(Blade, bool)> {
    if !v.is_subset_of(f) {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = v.0;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        let below = low - 1;
        // remaining indices of f below j; earlier contractions removed
        // exactly the indices of v below j
        swaps += (f.0 & below).count_ones() - (v.0 & below).count_ones();
        rest &= rest - 1;
    }
    Some((f.without(v), swaps % 2 == 1))
}

/// All grade-`k` blades in dimension `dim`, ordered lexicographically by
/// their index lists.
pub fn blades_of_grade(dim: usize, k: usize) -> Vec<Blade> {
    fn rec(start: usize, dim: usize, k: usize, acc: u32, out: &mut Vec<Blade>) {
        if k == 0 {
            out.push(Blade(acc));
            return;
        }
        for i in start..=dim {
            if dim - i + 1 < k {
                break;
            }
            rec(i + 1, dim, k - 1, acc | (1 << (i - 1)), out);
        }
    }
    let mut out = Vec::new();
    if k <= dim {
        rec(1, dim, k, 0, &mut out);
    }
    out
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Blade{:?}", self.indices())
    }
}

/// Index label: concatenated digits when every index is a single digit,
/// otherwise a bracketed list.
pub(crate) fn index_label(b: Blade) -> String {
    let idx = b.indices();
    if idx.iter().all(|&i| i <= 9) {
        idx.iter().map(|i| i.to_string()).collect()
    } else {
        format!("[{}]", idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
    }
}
