//! Storage for quantities indexed by a monomial `(b, c)` and a radial power `a`.
//!
//! The admissible set is the simplex `b + c <= bc_max`, `a_min <= a <= a_top - b - c`.
//! Entries live in a flat vector; each `(b, c)` owns a contiguous run of `a` values.

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialTable<T> {
    bc_max: usize,
    a_min: i32,
    a_top: i32,
    offsets: Vec<usize>,
    values: Vec<T>,
}

/// Order in which a table is swept by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepOrder {
    /// The `a`-axis, then the `b = 0` plane, then increasing `b` for each `c`.
    #[default]
    AxisFirst,
    /// By increasing total degree `b + c`.
    AscendingDegree,
}

impl<T: Copy + Default> MonomialTable<T> {
    pub fn new(bc_max: usize, a_min: i32, a_top: i32) -> Self {
        let n = bc_max + 1;
        let mut offsets = vec![usize::MAX; n * n];
        let mut len = 0;
        for c in 0..n {
            for b in 0..n - c {
                offsets[c * n + b] = len;
                let top = a_top - (b + c) as i32;
                if top >= a_min {
                    len += (top - a_min + 1) as usize;
                }
            }
        }
        Self {
            bc_max,
            a_min,
            a_top,
            offsets,
            values: vec![T::default(); len],
        }
    }

    /// Table whose entries are `f(b, c, a)`, evaluated in storage order.
    pub fn from_fn(bc_max: usize, a_min: i32, a_top: i32, mut f: impl FnMut(usize, usize, i32) -> T) -> Self {
        let n = bc_max + 1;
        let mut offsets = vec![usize::MAX; n * n];
        let len: i32 = (0..n as i32).map(|d| (d + 1) * (a_top - d - a_min + 1).max(0)).sum();
        let mut values = Vec::with_capacity(len as usize);
        for c in 0..n {
            for b in 0..n - c {
                offsets[c * n + b] = values.len();
                for a in a_min..=a_top - (b + c) as i32 {
                    values.push(f(b, c, a));
                }
            }
        }
        Self {
            bc_max,
            a_min,
            a_top,
            offsets,
            values,
        }
    }

    pub fn bc_max(&self) -> usize {
        self.bc_max
    }

    pub fn a_min(&self) -> i32 {
        self.a_min
    }

    pub fn a_top(&self) -> i32 {
        self.a_top
    }

    /// Largest `a` stored for monomial `(b, c)`.
    pub fn a_max(&self, b: usize, c: usize) -> i32 {
        self.a_top - (b + c) as i32
    }

    pub fn contains(&self, b: usize, c: usize, a: i32) -> bool {
        b + c <= self.bc_max && a >= self.a_min && a <= self.a_max(b, c)
    }

    fn index(&self, b: usize, c: usize, a: i32) -> usize {
        debug_assert!(
            self.contains(b, c, a),
            "({b},{c},{a}) outside table bc<={} a in [{}, {}]",
            self.bc_max,
            self.a_min,
            self.a_top
        );
        self.offsets[c * (self.bc_max + 1) + b] + (a - self.a_min) as usize
    }

    pub fn get(&self, b: usize, c: usize, a: i32) -> T {
        self.values[self.index(b, c, a)]
    }

    /// Stored values of monomial `(b, c)` for `a = a_min ..= a_max(b, c)`.
    pub fn run(&self, b: usize, c: usize) -> &[T] {
        let start = self.offsets[c * (self.bc_max + 1) + b];
        let len = (self.a_max(b, c) - self.a_min + 1).max(0) as usize;
        &self.values[start..start + len]
    }

    pub fn run_mut(&mut self, b: usize, c: usize) -> &mut [T] {
        let start = self.offsets[c * (self.bc_max + 1) + b];
        let len = (self.a_max(b, c) - self.a_min + 1).max(0) as usize;
        &mut self.values[start..start + len]
    }

    pub fn try_get(&self, b: usize, c: usize, a: i32) -> Option<T> {
        self.contains(b, c, a).then(|| self.get(b, c, a))
    }

    pub fn set(&mut self, b: usize, c: usize, a: i32, v: T) {
        let i = self.index(b, c, a);
        self.values[i] = v;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// All stored `(b, c, a)` in storage order.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize, i32)> + '_ {
        let n = self.bc_max + 1;
        (0..n).flat_map(move |c| {
            (0..n - c).flat_map(move |b| (self.a_min..=self.a_max(b, c)).map(move |a| (b, c, a)))
        })
    }

    pub fn map<U: Copy + Default>(&self, f: impl Fn(T) -> U) -> MonomialTable<U> {
        MonomialTable {
            bc_max: self.bc_max,
            a_min: self.a_min,
            a_top: self.a_top,
            offsets: self.offsets.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// `x^lo, x^{lo+1}, …, x^hi`.
pub(crate) fn powers(x: f64, lo: i32, hi: i32) -> Vec<f64> {
    let mut v = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    let mut q = x.powi(lo);
    for _ in lo..=hi {
        v.push(q);
        q *= x;
    }
    v
}

/// Fill a table with `a >= 0` over `b + c + a <= p` using an `a`-axis seed and
/// first-order steps in `b` and `c`.
///
/// `b_step(t, b, c, a)` returns entry `(b + 1, c, a)`; `c_step(t, 0, c, a)` returns
/// `(0, c + 1, a)`. Both may read any entry already written, including lower `a`
/// of the target monomial. The `b`-step is used whenever `b >= 1`.
pub(crate) fn sweep<T: Copy + Default>(
    p: usize,
    order: SweepOrder,
    mut seed: impl FnMut(i32) -> T,
    mut b_step: impl FnMut(&MonomialTable<T>, usize, usize, i32) -> T,
    mut c_step: impl FnMut(&MonomialTable<T>, usize, i32) -> T,
) -> MonomialTable<T> {
    let mut t = MonomialTable::new(p, 0, p as i32);
    for a in 0..=p as i32 {
        let v = seed(a);
        t.set(0, 0, a, v);
    }
    match order {
        SweepOrder::AxisFirst => {
            for c in 0..p {
                for a in 0..=t.a_max(0, c + 1) {
                    let v = c_step(&t, c, a);
                    t.set(0, c + 1, a, v);
                }
            }
            for c in 0..=p {
                for b in 0..p - c {
                    for a in 0..=t.a_max(b + 1, c) {
                        let v = b_step(&t, b, c, a);
                        t.set(b + 1, c, a, v);
                    }
                }
            }
        }
        SweepOrder::AscendingDegree => {
            for s in 1..=p {
                for c in 0..=s {
                    let b = s - c;
                    for a in 0..=t.a_max(b, c) {
                        let v = if b == 0 {
                            c_step(&t, c - 1, a)
                        } else {
                            b_step(&t, b - 1, c, a)
                        };
                        t.set(b, c, a, v);
                    }
                }
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_covers_simplex() {
        let t = MonomialTable::<f64>::new(3, -3, 5);
        let n = t.indices().count();
        assert_eq!(n, t.len());
        let mut seen = std::collections::HashSet::new();
        for (b, c, a) in t.indices() {
            assert!(seen.insert(t.index(b, c, a)));
        }
        assert!(t.contains(0, 0, -3));
        assert!(t.contains(3, 0, 2));
        assert!(!t.contains(3, 0, 3));
        assert!(!t.contains(2, 2, -3));
    }

    #[test]
    fn sweep_orders_agree() {
        let run = |order| {
            sweep(
                5,
                order,
                |a| 1.0 + a as f64,
                |t, b, c, a| 0.5 * t.get(b, c, a) + b as f64 - 0.1 * a as f64,
                |t, c, a| 0.3 * t.get(0, c, a) + c as f64,
            )
        };
        assert_eq!(run(SweepOrder::AxisFirst), run(SweepOrder::AscendingDegree));
    }
}
