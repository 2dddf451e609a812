use crate::error::{invalid, Error, Result};
use crate::gf2::{find_irreducible, mask, FieldSpec};

use super::{fwht, max_over_nonzero, BiasReport, SmallBiasSet, MAX_CERTIFY_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    LinearMultiples,
    AllKDimSpaces,
    SingletonWrap,
}

#[derive(Clone, Debug)]
enum Members {
    /// `C_a = {a·κ : κ ∈ span(1, x, …, x^{k−1})}` for nonzero `a`; index `i` ↦ `a = i + 1`.
    Multiples {
        field: FieldSpec,
        k: u32,
    },
    /// One basis per subspace.
    Spaces {
        bases: Vec<Vec<u64>>,
    },
    Singleton(SmallBiasSet),
}

/// An indexed family of subsets of {0,1}^m with a claimed root-mean-square bias.
#[derive(Clone, Debug)]
pub struct SetFamily {
    m: usize,
    claimed_bias: f64,
    members: Members,
}

impl SetFamily {
    pub fn singleton(set: SmallBiasSet) -> Self {
        Self { m: set.m(), claimed_bias: set.claimed_bias(), members: Members::Singleton(set) }
    }

    /// Every `k`-dimensional subspace of {0,1}^m, enumerated through reduced
    /// echelon bases (pivot = highest set bit of each row).
    pub fn all_k_dim_spaces(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k > m || m > 16 {
            return invalid(format!("need 1 ≤ k ≤ m ≤ 16, got m={m} k={k}"));
        }
        let mut bases = Vec::new();
        let mut pivots = Vec::with_capacity(k);
        collect_spaces(m, k, 0, &mut pivots, &mut bases)?;
        let ratio = ((1u64 << (m - k)) - 1) as f64 / ((1u64 << m) - 1) as f64;
        Ok(Self { m, claimed_bias: ratio.sqrt(), members: Members::Spaces { bases } })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn claimed_bias(&self) -> f64 {
        self.claimed_bias
    }

    pub fn kind(&self) -> FamilyKind {
        match self.members {
            Members::Multiples { .. } => FamilyKind::LinearMultiples,
            Members::Spaces { .. } => FamilyKind::AllKDimSpaces,
            Members::Singleton(_) => FamilyKind::SingletonWrap,
        }
    }

    pub fn index_size(&self) -> u64 {
        match &self.members {
            Members::Multiples { field, .. } => field.element_mask(),
            Members::Spaces { bases } => bases.len() as u64,
            Members::Singleton(_) => 1,
        }
    }

    /// The field behind a `LinearMultiples` family.
    pub fn field(&self) -> Option<&FieldSpec> {
        match &self.members {
            Members::Multiples { field, .. } => Some(field),
            _ => None,
        }
    }

    /// Generators of member `index` when the member is a linear space.
    pub fn generators(&self, index: u64) -> Result<Option<Vec<u64>>> {
        self.check_index(index)?;
        Ok(match &self.members {
            Members::Multiples { field, k } => {
                let a = index + 1;
                Some((0..*k).map(|j| field.mul_raw(a, 1 << j)).collect())
            }
            Members::Spaces { bases } => Some(bases[index as usize].clone()),
            Members::Singleton(_) => None,
        })
    }

    /// Points of member `index`. Linear members are listed in span order.
    pub fn member(&self, index: u64) -> Result<Vec<u64>> {
        match &self.members {
            Members::Singleton(set) => {
                self.check_index(index)?;
                Ok(set.points().to_vec())
            }
            _ => {
                let gens = self.generators(index)?.expect("linear member");
                Ok(span_words(&gens))
            }
        }
    }

    fn check_index(&self, index: u64) -> Result<()> {
        if index >= self.index_size() {
            return invalid(format!("member index {index} ≥ {}", self.index_size()));
        }
        Ok(())
    }
}

fn collect_spaces(m: usize, k: usize, from: usize, pivots: &mut Vec<usize>, out: &mut Vec<Vec<u64>>) -> Result<()> {
    if pivots.len() == k {
        // Row r may set any non-pivot column below its pivot.
        let free: Vec<Vec<usize>> = pivots.iter().map(|&p| (0..p).filter(|c| !pivots.contains(c)).collect()).collect();
        let total_free: usize = free.iter().map(Vec::len).sum();
        if out.len() as u64 + (1u64 << total_free) > 1 << 22 {
            return Err(Error::ResourceLimit("too many subspaces to enumerate".into()));
        }
        for assignment in 0u64..(1u64 << total_free) {
            let mut shift = 0;
            let basis = pivots
                .iter()
                .zip(&free)
                .map(|(&p, cols)| {
                    let mut row = 1u64 << p;
                    for (t, &c) in cols.iter().enumerate() {
                        row |= ((assignment >> (shift + t)) & 1) << c;
                    }
                    shift += cols.len();
                    row
                })
                .collect();
            out.push(basis);
        }
        return Ok(());
    }
    for p in from..m {
        pivots.push(p);
        collect_spaces(m, k, p + 1, pivots, out)?;
        pivots.pop();
    }
    Ok(())
}

fn span_words(gens: &[u64]) -> Vec<u64> {
    (0u64..1 << gens.len())
        .map(|c| gens.iter().enumerate().filter(|(j, _)| (c >> j) & 1 == 1).fold(0, |acc, (_, g)| acc ^ g))
        .collect()
}

/// Basis of `{α : α·g = 0 for all g in gens}` inside {0,1}^m.
pub(crate) fn dual_basis(m: usize, gens: &[u64]) -> Vec<u64> {
    // Reduced echelon form with pivot = highest set bit.
    let mut rows: Vec<(usize, u64)> = Vec::new();
    for &g in gens {
        let mut r = g;
        for &(p, row) in &rows {
            if (r >> p) & 1 == 1 {
                r ^= row;
            }
        }
        if r == 0 {
            continue;
        }
        let p = 63 - r.leading_zeros() as usize;
        for entry in rows.iter_mut() {
            if (entry.1 >> p) & 1 == 1 {
                entry.1 ^= r;
            }
        }
        rows.push((p, r));
    }
    (0..m)
        .filter(|c| rows.iter().all(|&(p, _)| p != *c))
        .map(|f| rows.iter().filter(|&&(_, row)| (row >> f) & 1 == 1).fold(1u64 << f, |acc, &(p, _)| acc | (1 << p)))
        .collect()
}

/// The pairwise-independent family over GF(2^{n2}): member `a` is the set of
/// multiples `a·κ` with `κ` in the span of the monomials `1, x, …, x^{k−1}`.
pub fn linear_family(n2: usize, k: usize) -> Result<SetFamily> {
    if k == 0 || k > n2 || n2 > MAX_CERTIFY_BITS {
        return invalid(format!("need 1 ≤ k ≤ n2 ≤ {MAX_CERTIFY_BITS}, got n2={n2} k={k}"));
    }
    let field = find_irreducible(n2 as u32)?;
    Ok(SetFamily {
        m: n2,
        claimed_bias: (2f64).powf(-(k as f64) / 2.0),
        members: Members::Multiples { field, k: k as u32 },
    })
}

/// Exact `max_{α≠0} sqrt(E_i[Â_i(α)²])`.
///
/// Linear members use `Â_i(α) = 1` iff `α ∈ C_i^⊥` (else 0): each member adds
/// one to every word of its dual space. Other members go through a
/// Walsh–Hadamard transform.
pub fn certify_family_bias(family: &SetFamily) -> Result<BiasReport> {
    let mean_sq = mean_square_bias(family)?;
    Ok(max_over_nonzero(family.m, mean_sq.into_iter().map(f64::sqrt)))
}

/// `E_i[Â_i(α)²]` for every α.
pub fn mean_square_bias(family: &SetFamily) -> Result<Vec<f64>> {
    let m = family.m;
    if m > MAX_CERTIFY_BITS {
        return Err(Error::ResourceLimit(format!("family over {m} bits is too large to certify")));
    }
    let size = family.index_size();
    match &family.members {
        Members::Singleton(set) => Ok(set.bias_spectrum()?.into_iter().map(|b| b * b).collect()),
        _ => {
            let mut hits = vec![0u64; 1 << m];
            for i in 0..size {
                let gens = family.generators(i)?.expect("linear member");
                for alpha in span_words(&dual_basis(m, &gens)) {
                    hits[alpha as usize] += 1;
                }
            }
            Ok(hits.into_iter().map(|h| h as f64 / size as f64).collect())
        }
    }
}

/// `E_i[Â_i(α)²]` by transforming every member's indicator. Slow; used to
/// cross-check the dual-space shortcut.
pub fn mean_square_bias_by_transform(family: &SetFamily) -> Result<Vec<f64>> {
    let m = family.m;
    if m > 16 {
        return Err(Error::ResourceLimit(format!("transform route limited to 16 bits, got {m}")));
    }
    let mut acc = vec![0f64; 1 << m];
    let size = family.index_size();
    for i in 0..size {
        let points = family.member(i)?;
        let mut counts = vec![0i64; 1 << m];
        for p in &points {
            counts[(*p & mask(m)) as usize] += 1;
        }
        fwht(&mut counts);
        let n = points.len() as f64;
        for (a, w) in acc.iter_mut().zip(counts) {
            *a += (w as f64 / n).powi(2);
        }
    }
    Ok(acc.into_iter().map(|a| a / size as f64).collect())
}
