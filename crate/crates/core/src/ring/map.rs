use super::{Elem, RingHandle};

/// A ring homomorphism between finite rings, stored as its table of images.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: RingHandle,
    target: RingHandle,
    images: Vec<Elem>,
}

impl RingMap {
    pub(crate) fn from_images(source: RingHandle, target: RingHandle, images: Vec<Elem>) -> Self {
        debug_assert_eq!(images.len() as u64, source.order());
        RingMap {
            source,
            target,
            images,
        }
    }

    pub fn identity(ring: &RingHandle) -> Self {
        let images = ring.all_elements().collect();
        Self::from_images(ring.clone(), ring.clone(), images)
    }

    pub fn source(&self) -> &RingHandle {
        &self.source
    }

    pub fn target(&self) -> &RingHandle {
        &self.target
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x.index()]
    }

    /// Elements of the source mapping to zero, in canonical order.
    pub fn kernel(&self) -> Vec<Elem> {
        self.source
            .all_elements()
            .filter(|&x| self.apply(x) == Elem::ZERO)
            .collect()
    }

    /// Checks the homomorphism laws exhaustively.
    pub fn is_homomorphism(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if self.apply(s.one()) != t.one() {
            return false;
        }
        s.all_elements().all(|x| {
            s.all_elements().all(|y| {
                self.apply(s.add(x, y)) == t.add(self.apply(x), self.apply(y))
                    && self.apply(s.mul(x, y)) == t.mul(self.apply(x), self.apply(y))
            })
        })
    }
}
