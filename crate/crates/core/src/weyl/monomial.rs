use std::fmt;

/// Largest supported spacetime dimension.
pub const MAX_DIM: usize = 8;

/// A normal-ordered word `x^a · dx_{i1} dx_{i2} … · ∂^b` with the one-form
/// indices strictly ascending.
///
/// Terms are ordered by coordinate degree, then one-forms, then derivative
/// degree, with lower indices first inside each group; this is the
/// canonical term order for rendering.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct NormalMonomial {
    x: [u16; MAX_DIM],
    dx: u16,
    d: [u16; MAX_DIM],
}

impl NormalMonomial {
    pub const ONE: NormalMonomial = NormalMonomial { x: [0; MAX_DIM], dx: 0, d: [0; MAX_DIM] };

    pub fn new(x: &[u16], dx: &[usize], d: &[u16]) -> Self {
        let mut m = Self::ONE;
        for (k, &e) in x.iter().enumerate() {
            m.x[k] = e;
        }
        for &k in dx {
            assert!(m.dx & (1 << k) == 0, "dx_{k} appears twice");
            m.dx |= 1 << k;
        }
        for (k, &e) in d.iter().enumerate() {
            m.d[k] = e;
        }
        m
    }

    pub fn x(mu: usize) -> Self {
        let mut m = Self::ONE;
        m.x[mu] = 1;
        m
    }

    pub fn d(mu: usize) -> Self {
        let mut m = Self::ONE;
        m.d[mu] = 1;
        m
    }

    pub fn dx(mu: usize) -> Self {
        let mut m = Self::ONE;
        m.dx = 1 << mu;
        m
    }

    pub fn d_pow(mu: usize, k: u16) -> Self {
        let mut m = Self::ONE;
        m.d[mu] = k;
        m
    }

    pub fn xexp(&self) -> &[u16; MAX_DIM] {
        &self.x
    }

    pub fn dexp(&self) -> &[u16; MAX_DIM] {
        &self.d
    }

    pub fn dxmask(&self) -> u16 {
        self.dx
    }

    pub fn dx_indices(&self) -> Vec<usize> {
        (0..MAX_DIM).filter(|k| self.dx & (1 << k) != 0).collect()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    /// Number of one-form factors.
    pub fn form_degree(&self) -> u32 {
        self.dx.count_ones()
    }

    pub fn parity(&self) -> u8 {
        (self.dx.count_ones() % 2) as u8
    }

    pub fn has_x(&self) -> bool {
        self.x.iter().any(|&e| e > 0)
    }

    pub fn has_d(&self) -> bool {
        self.d.iter().any(|&e| e > 0)
    }

    pub fn has_dx(&self) -> bool {
        self.dx != 0
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().map(|&e| e as u32).sum()
    }

    pub fn d_degree(&self) -> u32 {
        self.d.iter().map(|&e| e as u32).sum()
    }

    /// The `x`/`dx` part with all derivatives removed.
    pub fn without_d(&self) -> Self {
        Self { x: self.x, dx: self.dx, d: [0; MAX_DIM] }
    }

    /// Only the derivative part.
    pub fn d_part(&self) -> Self {
        Self { x: [0; MAX_DIM], dx: 0, d: self.d }
    }

    pub(crate) fn with_d(&self, mu: usize, e: u16) -> Self {
        let mut m = *self;
        m.d[mu] = e;
        m
    }

    /// Normal-ordered expansion of `self · other`, pushed onto `out` as
    /// `(monomial, integer factor)` pairs with the Koszul sign included.
    ///
    /// Per coordinate, `∂^b x^a = Σ_k C(b,k) C(a,k) k! η^k x^{a-k} ∂^{b-k}`;
    /// one-forms commute with `x` and `∂` and anticommute among themselves.
    pub fn product_into(&self, other: &Self, dim: usize, out: &mut Vec<(NormalMonomial, i128)>) {
        if self.dx & other.dx != 0 {
            return;
        }
        let sign = koszul_sign(self.dx, other.dx);
        let mut base = NormalMonomial { x: [0; MAX_DIM], dx: self.dx | other.dx, d: [0; MAX_DIM] };
        for k in 0..MAX_DIM {
            base.x[k] = self.x[k] + other.x[k];
            base.d[k] = self.d[k] + other.d[k];
        }
        let start = out.len();
        out.push((base, sign));
        for mu in 0..dim {
            let b = self.d[mu];
            let a = other.x[mu];
            let kmax = a.min(b);
            if kmax == 0 {
                continue;
            }
            let eta: i128 = if mu == 0 { -1 } else { 1 };
            let len = out.len();
            for idx in start..len {
                let (m, f) = out[idx];
                for k in 1..=kmax {
                    let mut mk = m;
                    mk.x[mu] -= k;
                    mk.d[mu] -= k;
                    let mut factor = binom(b, k) * binom(a, k) * factorial(k);
                    if k % 2 == 1 {
                        factor *= eta;
                    }
                    out.push((mk, f * factor));
                }
            }
        }
    }
}

/// `(-1)^{#pairs (i in left, j in right) with i > j}`.
pub(crate) fn koszul_sign(left: u16, right: u16) -> i128 {
    let mut swaps = 0u32;
    let mut r = right;
    while r != 0 {
        let j = r.trailing_zeros();
        let above = if j >= 15 { 0 } else { left & !((1u16 << (j + 1)) - 1) };
        swaps += above.count_ones();
        r &= r - 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn binom(n: u16, k: u16) -> i128 {
    let mut r: i128 = 1;
    for j in 0..k as i128 {
        r = r * (n as i128 - j) / (j + 1);
    }
    r
}

fn factorial(k: u16) -> i128 {
    (1..=k as i128).product()
}

type SortKey = (u32, std::cmp::Reverse<[u16; MAX_DIM]>, u32, u16, u32, std::cmp::Reverse<[u16; MAX_DIM]>);

impl NormalMonomial {
    fn sort_key(&self) -> SortKey {
        use std::cmp::Reverse;
        (self.x_degree(), Reverse(self.x), self.form_degree(), self.dx, self.d_degree(), Reverse(self.d))
    }
}

impl Ord for NormalMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for NormalMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &e) in self.x.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{k}")),
                _ => parts.push(format!("x{k}^{e}")),
            }
        }
        for k in self.dx_indices() {
            parts.push(format!("dx{k}"));
        }
        for (k, &e) in self.d.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("d{k}")),
                _ => parts.push(format!("d{k}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_signs() {
        // dx1 · dx0 = -dx0 dx1
        assert_eq!(koszul_sign(0b10, 0b01), -1);
        assert_eq!(koszul_sign(0b01, 0b10), 1);
        // (dx1 dx2) · dx0 needs two swaps
        assert_eq!(koszul_sign(0b110, 0b001), 1);
        // (dx0 dx2) · dx1 needs one swap
        assert_eq!(koszul_sign(0b101, 0b010), -1);
    }

    #[test]
    fn d0_times_x0_square() {
        let mut out = Vec::new();
        NormalMonomial::d(0).product_into(&NormalMonomial::new(&[2], &[], &[]), 4, &mut out);
        out.sort();
        let expect = vec![
            (NormalMonomial::x(0), -2),
            (NormalMonomial::new(&[2], &[], &[1]), 1),
        ];
        assert_eq!(out, expect);
    }

    #[test]
    fn repeated_one_form_vanishes() {
        let mut out = Vec::new();
        NormalMonomial::new(&[], &[0, 1], &[]).product_into(&NormalMonomial::dx(0), 4, &mut out);
        assert!(out.is_empty());
    }
}
