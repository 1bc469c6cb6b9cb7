//! Injective enumerations `k -> index` of natural numbers.
//!
//! Lazy frameworks and lazy trees use these to describe infinite attacker
//! lists and infinite child lists. Affine families are handled
//! arithmetically; generator-owned codings (tree paths, pairing-based unions)
//! supply their own forward and inverse maps.

use std::fmt;
use std::sync::Arc;

type MemberFn = dyn Fn(u64) -> Option<usize> + Send + Sync;
type LocateFn = dyn Fn(usize) -> Option<u64> + Send + Sync;

#[derive(Clone)]
pub enum IndexFamily {
    /// `k -> stride*k + offset` with `stride >= 1`.
    Affine { stride: u64, offset: u64 },
    Coded(Arc<CodedFamily>),
}

pub struct CodedFamily {
    label: String,
    member: Box<MemberFn>,
    locate: Box<LocateFn>,
}

impl IndexFamily {
    pub fn affine(stride: u64, offset: u64) -> Self {
        assert!(stride >= 1, "affine family stride must be positive");
        IndexFamily::Affine { stride, offset }
    }

    /// A family given by a forward map and its inverse. `member` returns
    /// `None` when the index does not fit the machine word.
    pub fn coded(
        label: impl Into<String>,
        member: impl Fn(u64) -> Option<usize> + Send + Sync + 'static,
        locate: impl Fn(usize) -> Option<u64> + Send + Sync + 'static,
    ) -> Self {
        IndexFamily::Coded(Arc::new(CodedFamily {
            label: label.into(),
            member: Box::new(member),
            locate: Box::new(locate),
        }))
    }

    pub fn member(&self, k: u64) -> Option<usize> {
        match self {
            IndexFamily::Affine { stride, offset } => stride
                .checked_mul(k)
                .and_then(|x| x.checked_add(*offset))
                .and_then(|x| usize::try_from(x).ok()),
            IndexFamily::Coded(c) => (c.member)(k),
        }
    }

    /// The parameter `k` with `member(k) == x`, if any.
    pub fn locate(&self, x: usize) -> Option<u64> {
        match self {
            IndexFamily::Affine { stride, offset } => {
                let x = x as u64;
                (x >= *offset && (x - offset) % stride == 0).then(|| (x - offset) / stride)
            }
            IndexFamily::Coded(c) => (c.locate)(x),
        }
    }

    /// The same family with every member shifted up by `delta`.
    pub fn shifted(&self, delta: usize) -> IndexFamily {
        match self {
            IndexFamily::Affine { stride, offset } => IndexFamily::Affine {
                stride: *stride,
                offset: offset + delta as u64,
            },
            IndexFamily::Coded(_) => {
                let fwd = self.clone();
                let back = self.clone();
                IndexFamily::coded(
                    format!("{self:?}+{delta}"),
                    move |k| fwd.member(k).and_then(|x| x.checked_add(delta)),
                    move |x| x.checked_sub(delta).and_then(|y| back.locate(y)),
                )
            }
        }
    }

    /// Composes with an injective outer map (and its inverse).
    pub fn mapped(
        &self,
        label: impl Into<String>,
        outer: impl Fn(usize) -> Option<usize> + Send + Sync + 'static,
        outer_inv: impl Fn(usize) -> Option<usize> + Send + Sync + 'static,
    ) -> IndexFamily {
        let fwd = self.clone();
        let back = self.clone();
        IndexFamily::coded(
            label,
            move |k| fwd.member(k).and_then(&outer),
            move |x| outer_inv(x).and_then(|y| back.locate(y)),
        )
    }
}

impl fmt::Debug for IndexFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexFamily::Affine { stride, offset } => write!(f, "{stride}k+{offset}"),
            IndexFamily::Coded(c) => f.write_str(&c.label),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_member_and_locate_are_inverse() {
        let fam = IndexFamily::affine(4, 2);
        assert_eq!(fam.member(0), Some(2));
        assert_eq!(fam.member(3), Some(14));
        assert_eq!(fam.locate(14), Some(3));
        assert_eq!(fam.locate(13), None);
        assert_eq!(fam.locate(1), None);
    }

    #[test]
    fn shifted_coded_family() {
        let fam = IndexFamily::coded("squares", |k| Some((k * k) as usize), |x| {
            let r = (x as f64).sqrt() as u64;
            (r * r == x as u64).then_some(r)
        });
        let up = fam.shifted(1);
        assert_eq!(up.member(3), Some(10));
        assert_eq!(up.locate(10), Some(3));
        assert_eq!(up.locate(0), None);
        let aff = IndexFamily::affine(2, 1).shifted(1);
        assert_eq!(aff.member(0), Some(2));
    }
}
