//! Monomial enumeration and the truncated multiplication table shared by all jets.

use std::sync::OnceLock;

use super::MAX_ORDER;

const SIDE: usize = MAX_ORDER + 1;

pub(crate) struct Tables {
    /// Exponents in graded order: all degree 0, then degree 1, ...
    pub monomials: Vec<[u8; 4]>,
    /// `offset[d]` = number of monomials of degree < d.
    pub offset: Vec<usize>,
    lookup: Vec<usize>,
    /// `(i, j, k)` with `mono[i] + mono[j] = mono[k]`, sorted by degree of `k`.
    pub products: Vec<(u16, u16, u16)>,
    /// `product_end[d]` = number of products whose result has degree <= d.
    pub product_end: Vec<usize>,
}

fn key(e: &[u8; 4]) -> usize {
    ((e[0] as usize * SIDE + e[1] as usize) * SIDE + e[2] as usize) * SIDE + e[3] as usize
}

impl Tables {
    fn build() -> Self {
        let mut monomials = Vec::new();
        let mut offset = Vec::with_capacity(MAX_ORDER + 2);
        for d in 0..=MAX_ORDER {
            offset.push(monomials.len());
            for kt in (0..=d).rev() {
                for kx in (0..=d - kt).rev() {
                    for ky in (0..=d - kt - kx).rev() {
                        let kz = d - kt - kx - ky;
                        monomials.push([kt as u8, kx as u8, ky as u8, kz as u8]);
                    }
                }
            }
        }
        offset.push(monomials.len());

        let mut lookup = vec![usize::MAX; SIDE.pow(4)];
        for (pos, e) in monomials.iter().enumerate() {
            lookup[key(e)] = pos;
        }

        let mut products = Vec::new();
        let mut product_end = Vec::with_capacity(MAX_ORDER + 1);
        for d in 0..=MAX_ORDER {
            for k in offset[d]..offset[d + 1] {
                let ek = monomials[k];
                for i in 0..offset[d + 1] {
                    let ei = monomials[i];
                    if (0..4).all(|a| ei[a] <= ek[a]) {
                        let ej = [ek[0] - ei[0], ek[1] - ei[1], ek[2] - ei[2], ek[3] - ei[3]];
                        products.push((i as u16, lookup[key(&ej)] as u16, k as u16));
                    }
                }
            }
            product_end.push(products.len());
        }

        Tables {
            monomials,
            offset,
            lookup,
            products,
            product_end,
        }
    }

    pub fn position(&self, e: &[u8; 4]) -> usize {
        self.lookup[key(e)]
    }

    pub fn len(&self, order: usize) -> usize {
        self.offset[order + 1]
    }
}

pub(crate) fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(Tables::build)
}

/// Number of Taylor coefficients of a four-variable jet of the given order, `C(order + 4, 4)`.
pub fn coefficient_count(order: usize) -> usize {
    (order + 1) * (order + 2) * (order + 3) * (order + 4) / 24
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomial() {
        let t = tables();
        for k in 0..=MAX_ORDER {
            assert_eq!(t.len(k), coefficient_count(k));
        }
        assert_eq!(coefficient_count(3), 35);
        assert_eq!(coefficient_count(4), 70);
    }

    #[test]
    fn lookup_inverts_enumeration() {
        let t = tables();
        for (pos, e) in t.monomials.iter().enumerate() {
            assert_eq!(t.position(e), pos);
        }
    }

    #[test]
    fn graded_order() {
        let t = tables();
        let degrees: Vec<u32> = t
            .monomials
            .iter()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .collect();
        assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
    }
}
