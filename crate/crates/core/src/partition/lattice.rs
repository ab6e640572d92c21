//! Set partitions of `{0, .., len-1}` and the refinement order.

use serde::Serialize;

/// A partition in canonical form: each class sorted, classes ordered by
/// their smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct IndexPartition {
    classes: Vec<Vec<usize>>,
}

impl IndexPartition {
    /// Canonicalizes `classes`; `None` unless they form a disjoint cover of
    /// `0..len` by nonempty sets.
    pub fn new(len: usize, classes: Vec<Vec<usize>>) -> Option<Self> {
        let mut seen = vec![false; len];
        for c in &classes {
            if c.is_empty() {
                return None;
            }
            for &i in c {
                if i >= len || seen[i] {
                    return None;
                }
                seen[i] = true;
            }
        }
        seen.iter().all(|&s| s).then(|| Self::canonical(classes))
    }

    fn canonical(mut classes: Vec<Vec<usize>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        IndexPartition { classes }
    }

    /// Partition from a class label per element.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (i, &l) in labels.iter().enumerate() {
            map.entry(l).or_default().push(i);
        }
        Self::canonical(map.into_values().collect())
    }

    pub fn singletons(len: usize) -> Self {
        IndexPartition { classes: (0..len).map(|i| vec![i]).collect() }
    }

    pub fn whole(len: usize) -> Self {
        if len == 0 {
            return IndexPartition { classes: vec![] };
        }
        IndexPartition { classes: vec![(0..len).collect()] }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn len(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for (j, c) in self.classes.iter().enumerate() {
            for &i in c {
                out[i] = j;
            }
        }
        out
    }

    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&i))
    }

    /// True when every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &IndexPartition) -> bool {
        let theirs = other.labels();
        self.classes
            .iter()
            .all(|c| c.iter().all(|&i| theirs[i] == theirs[c[0]]))
    }

    /// Coarsest common refinement: nonempty pairwise intersections.
    pub fn meet(&self, other: &IndexPartition) -> IndexPartition {
        let (a, b) = (self.labels(), other.labels());
        let width = other.num_classes().max(1);
        let joint: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x * width + y).collect();
        Self::from_labels(&joint)
    }

    pub fn all_singletons(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }
}

/// Every partition of `0..len`, via restricted growth strings.
pub fn all_partitions(len: usize) -> Vec<IndexPartition> {
    let mut out = Vec::new();
    if len == 0 {
        out.push(IndexPartition::whole(0));
        return out;
    }
    let mut rgs = vec![0usize; len];
    loop {
        out.push(IndexPartition::from_labels(&rgs));
        // Advance: rightmost position that can grow.
        let mut i = len - 1;
        loop {
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if i > 0 && rgs[i] <= max_prefix {
                rgs[i] += 1;
                for slot in rgs.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                break;
            }
            if i <= 1 {
                return out;
            }
            i -= 1;
        }
    }
}
