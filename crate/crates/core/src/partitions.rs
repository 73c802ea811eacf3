//! Set partitions of `{1..n}`, their meet, and the stabilizer subgroups
//! `G_A` (represented by the membership predicate [`fixes`] and the order).
//!
//! Indices are 0-based internally; `Display` prints 1-based blocks as
//! `{1,2|3,4}`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// A bijection on `{0..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.n(),
            other.n(),
            "composing permutations of different degree"
        );
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// All `n!` permutations in lexicographic order of their image vectors.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((0..n).collect()),
        }
    }
}

/// Iterator returned by [`Permutation::all`].
pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut a = current.clone();
        // Standard next-permutation step.
        if let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) {
            let j = (i..a.len())
                .rev()
                .find(|&j| a[j] > a[i - 1])
                .expect("pivot");
            a.swap(i - 1, j);
            a[i..].reverse();
            self.next = Some(a);
        }
        Some(Permutation { images: current })
    }
}

/// Partition of `{0..n}` with blocks sorted internally and ordered by their
/// minimum element, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside 0..{n}"
                    )));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} in two blocks"
                    )));
                }
                labels[x] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::InvalidPartition("blocks do not cover 0..n".into()));
        }
        Ok(Self::from_labels(&labels))
    }

    /// `i` and `l` share a block iff `labels[i] == labels[l]`.
    pub fn from_labels<L: Eq + Hash>(labels: &[L]) -> Self {
        let mut index: HashMap<&L, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let b = *index.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(i);
        }
        // First occurrences appear in increasing order, so blocks are already
        // sorted by minimum.
        SetPartition {
            n: labels.len(),
            blocks,
        }
    }

    pub fn singletons(n: usize) -> Self {
        SetPartition {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn whole(n: usize) -> Self {
        SetPartition {
            n,
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `|A|`, the number of blocks.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                labels[x] = b;
            }
        }
        labels
    }
}

/// `parti(a)`: the partition of positions by equality of coordinates.
pub fn parti<E: Eq + Hash>(a: &[E]) -> SetPartition {
    SetPartition::from_labels(a)
}

fn same_n(a: &SetPartition, b: &SetPartition) -> Result<()> {
    if a.n != b.n {
        return Err(Error::dim(format!(
            "partitions of {} and {} elements",
            a.n, b.n
        )));
    }
    Ok(())
}

/// `A ⊓ B`: the nonempty pairwise intersections of blocks.
pub fn meet(a: &SetPartition, b: &SetPartition) -> Result<SetPartition> {
    same_n(a, b)?;
    let pairs: Vec<(usize, usize)> = a.labels().into_iter().zip(b.labels()).collect();
    Ok(SetPartition::from_labels(&pairs))
}

/// Meet of a nonempty list; `None` for an empty list.
pub fn meet_all<'a>(
    parts: impl IntoIterator<Item = &'a SetPartition>,
) -> Result<Option<SetPartition>> {
    let mut acc: Option<SetPartition> = None;
    for p in parts {
        acc = Some(match acc {
            None => p.clone(),
            Some(a) => meet(&a, p)?,
        });
    }
    Ok(acc)
}

/// `s ∈ G_A`: every block is mapped onto itself.
pub fn fixes(s: &Permutation, a: &SetPartition) -> Result<bool> {
    if s.n() != a.n {
        return Err(Error::dim(format!(
            "permutation on {} points, partition of {}",
            s.n(),
            a.n
        )));
    }
    let labels = a.labels();
    Ok((0..a.n).all(|i| labels[s.image(i)] == labels[i]))
}

/// Every block of `a` lies inside a block of `b`.
pub fn refines(a: &SetPartition, b: &SetPartition) -> Result<bool> {
    same_n(a, b)?;
    let lb = b.labels();
    Ok(a.blocks
        .iter()
        .all(|block| block.iter().all(|&x| lb[x] == lb[block[0]])))
}

/// `|G_A| = Π |I|!`.
pub fn stabilizer_order(a: &SetPartition) -> u128 {
    a.blocks.iter().map(|b| factorial(b.len())).product()
}

/// `min(A)`, the smallest block size.
pub fn min_block(a: &SetPartition) -> usize {
    a.blocks.iter().map(Vec::len).min().unwrap_or(0)
}

pub(crate) fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                f.write_str("|")?;
            }
            let items: Vec<String> = block.iter().map(|x| (x + 1).to_string()).collect();
            f.write_str(&items.join(","))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
