//! Truncated hyper-dual numbers with interval coefficients.
//!
//! A jet over `k` perturbation slots is a multilinear polynomial in
//! `eps_0 .. eps_{k-1}` with `eps_i^2 = 0`. Coefficient `S` (a bit mask) holds the
//! mixed directional derivative along the slots in `S`. Evaluating a tower on
//! jets seeded with `x + eps_j * v_j` yields `f^(|S|)(x; v_S)` at every `S`.

use std::sync::OnceLock;

use crate::exactnum::{Dyadic, Interval, Precision};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Jet {
    slots: u32,
    coeffs: Vec<Interval>,
}

impl Jet {
    pub fn from_coeffs(slots: u32, coeffs: Vec<Interval>) -> Jet {
        assert_eq!(coeffs.len(), 1usize << slots, "jet coefficient count");
        Jet { slots, coeffs }
    }

    /// `v` with every perturbation coefficient exactly zero.
    pub fn constant(v: Interval, slots: u32) -> Jet {
        let mut coeffs = vec![Interval::zero(); 1usize << slots];
        coeffs[0] = v;
        Jet { slots, coeffs }
    }

    pub fn zero(slots: u32) -> Jet {
        Jet { slots, coeffs: vec![Interval::zero(); 1usize << slots] }
    }

    pub fn bottom(slots: u32) -> Jet {
        Jet { slots, coeffs: vec![Interval::bottom(); 1usize << slots] }
    }

    /// `v + eps_slot`.
    pub fn variable(v: Interval, slot: u32, slots: u32) -> Jet {
        let mut j = Jet::constant(v, slots);
        j.coeffs[1usize << slot] = Interval::one();
        j
    }

    pub fn slots(&self) -> u32 {
        self.slots
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn base(&self) -> &Interval {
        &self.coeffs[0]
    }

    pub fn get(&self, mask: usize) -> &Interval {
        &self.coeffs[mask]
    }

    pub fn set(&mut self, mask: usize, v: Interval) {
        self.coeffs[mask] = v;
    }

    pub fn coeffs(&self) -> &[Interval] {
        &self.coeffs
    }

    /// Coefficient of the product of all slots.
    pub fn top(&self) -> &Interval {
        self.coeffs.last().unwrap()
    }

    /// Split off the highest slot: `self = lower + eps_top * upper`.
    pub fn split_top(&self) -> (Jet, Jet) {
        assert!(self.slots > 0, "no slot to split");
        let half = self.coeffs.len() / 2;
        (
            Jet { slots: self.slots - 1, coeffs: self.coeffs[..half].to_vec() },
            Jet { slots: self.slots - 1, coeffs: self.coeffs[half..].to_vec() },
        )
    }

    /// `lower + eps_new * upper`, with the new slot above the existing ones.
    pub fn join_top(lower: &Jet, upper: &Jet) -> Jet {
        assert_eq!(lower.slots, upper.slots);
        let mut coeffs = lower.coeffs.clone();
        coeffs.extend_from_slice(&upper.coeffs);
        Jet { slots: lower.slots + 1, coeffs }
    }

    /// The same polynomial over `extra` additional (unused) higher slots.
    pub fn extend(&self, extra: u32) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(self.coeffs.len() << extra, Interval::zero());
        Jet { slots: self.slots + extra, coeffs }
    }

    pub fn map(&self, f: impl Fn(&Interval) -> Interval) -> Jet {
        Jet { slots: self.slots, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Jet, p: Precision) -> Jet {
        assert_eq!(self.slots, o.slots);
        Jet { slots: self.slots, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b, p)).collect() }
    }

    pub fn sub(&self, o: &Jet, p: Precision) -> Jet {
        assert_eq!(self.slots, o.slots);
        Jet { slots: self.slots, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b, p)).collect() }
    }

    pub fn neg(&self) -> Jet {
        self.map(Interval::neg)
    }

    pub fn shl(&self, k: i64) -> Jet {
        self.map(|c| c.shl(k))
    }

    pub fn scale(&self, c: &Interval, p: Precision) -> Jet {
        self.map(|x| x.mul(c, p))
    }

    pub fn scale_dyadic(&self, c: &Dyadic, p: Precision) -> Jet {
        self.scale(&Interval::point(c.clone()), p)
    }

    /// Product: subset convolution of coefficients (Leibniz rule).
    pub fn mul(&self, o: &Jet, p: Precision) -> Jet {
        assert_eq!(self.slots, o.slots);
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n);
        for s in 0..n {
            let mut acc = self.coeffs[s].mul(&o.coeffs[0], p);
            let mut t = s;
            while t != 0 {
                t = (t - 1) & s;
                acc = acc.add(&self.coeffs[t].mul(&o.coeffs[s ^ t], p), p);
            }
            out.push(acc);
        }
        Jet { slots: self.slots, coeffs: out }
    }

    /// `phi(self)` given enclosures `derivs[j]` of `phi^(j)` over the base
    /// interval, `j = 0..=slots`: Faa di Bruno over set partitions.
    pub fn compose_univariate(&self, derivs: &[Interval], p: Precision) -> Jet {
        assert!(derivs.len() > self.slots as usize, "need derivatives up to the slot count");
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n);
        out.push(derivs[0].clone());
        let mut by_blocks: Vec<Option<Interval>> = vec![None; self.slots as usize + 1];
        for s in 1..n {
            by_blocks.iter_mut().for_each(|b| *b = None);
            for_each_partition(s, &mut |blocks: &[usize]| {
                let mut prod = self.coeffs[blocks[0]].clone();
                for &b in &blocks[1..] {
                    prod = prod.mul(&self.coeffs[b], p);
                }
                let slot = &mut by_blocks[blocks.len()];
                *slot = Some(match slot.take() {
                    Some(acc) => acc.add(&prod, p),
                    None => prod,
                });
            });
            let mut acc = Interval::zero();
            for (j, sum) in by_blocks.iter().enumerate() {
                if let Some(sum) = sum {
                    acc = acc.add(&derivs[j].mul(sum, p), p);
                }
            }
            out.push(acc);
        }
        Jet { slots: self.slots, coeffs: out }
    }

    /// `1 / self`; every coefficient is bottom when the base contains zero.
    pub fn recip(&self, p: Precision) -> Jet {
        let r = self.base().recip(p);
        let mut derivs = Vec::with_capacity(self.slots as usize + 1);
        // d^j/dx^j x^-1 = (-1)^j j! x^-(j+1)
        let mut cur = r.clone();
        for j in 0..=self.slots as usize {
            derivs.push(cur.clone());
            cur = cur.mul(&r, p).scale(&Dyadic::from_i64(-(j as i64 + 1)), p);
        }
        self.compose_univariate(&derivs, p)
    }

    pub fn div(&self, o: &Jet, p: Precision) -> Jet {
        self.mul(&o.recip(p), p)
    }
}

/// Set partitions of a bit mask, each block as a bit mask.
pub fn for_each_partition(mask: usize, f: &mut dyn FnMut(&[usize])) {
    if mask < CACHED_MASKS {
        for part in &partition_table()[mask] {
            f(part);
        }
    } else {
        let mut blocks = Vec::new();
        partitions_rec(mask, &mut blocks, f);
    }
}

const CACHED_MASKS: usize = 1 << 7;

fn partition_table() -> &'static Vec<Vec<Vec<usize>>> {
    static TABLE: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..CACHED_MASKS)
            .map(|m| {
                let mut all = Vec::new();
                let mut blocks = Vec::new();
                partitions_rec(m, &mut blocks, &mut |b: &[usize]| all.push(b.to_vec()));
                all
            })
            .collect()
    })
}

fn partitions_rec(rest: usize, blocks: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if rest == 0 {
        if !blocks.is_empty() {
            f(blocks);
        }
        return;
    }
    let low = rest & rest.wrapping_neg();
    let others = rest ^ low;
    // Every block containing the lowest element: `low` plus a submask of the rest.
    let mut sub = others;
    loop {
        blocks.push(low | sub);
        partitions_rec(others ^ sub, blocks, f);
        blocks.pop();
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & others;
    }
}
