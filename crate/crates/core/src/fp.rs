//! Small dense linear algebra over F_p.

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Incrementally maintained row-echelon basis of a subspace of F_p^n.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    n: usize,
    // each row is normalized with a leading 1 at `pivots[k]`
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(n: usize, p: u32) -> Self {
        Echelon {
            p,
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = w[piv] as u64;
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = ((*x as u64 + (p - c) * r as u64) % p) as u32;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.n);
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv_mod(w[piv], self.p) as u64;
        for x in w.iter_mut() {
            *x = (*x as u64 * s % self.p as u64) as u32;
        }
        self.rows.push(w);
        self.pivots.push(piv);
        true
    }
}

pub fn rank(rows: &[Vec<u32>], p: u32) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut e = Echelon::new(first.len(), p);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{x : <v, x> = 0 for all v in rows}` in F_p^n.
pub fn annihilator(rows: &[Vec<u32>], n: usize, p: u32) -> Vec<Vec<u32>> {
    // reduced row echelon form, then read off the free columns
    let mut m: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    let pp = p as u64;
    for col in 0..n {
        let Some(k) = (row..m.len()).find(|&k| m[k][col] != 0) else {
            continue;
        };
        m.swap(row, k);
        let s = inv_mod(m[row][col], p) as u64;
        for x in m[row].iter_mut() {
            *x = (*x as u64 * s % pp) as u32;
        }
        for k in 0..m.len() {
            if k != row && m[k][col] != 0 {
                let c = m[k][col] as u64;
                let pivot_row = m[row].clone();
                for (x, &r) in m[k].iter_mut().zip(&pivot_row) {
                    *x = ((*x as u64 + (pp - c) * r as u64) % pp) as u32;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u32; n];
            x[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = ((pp - m[r][f] as u64) % pp) as u32;
            }
            x
        })
        .collect()
}

pub fn dot(a: &[u32], b: &[u32], p: u32) -> u32 {
    (a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum::<u64>() % p as u64) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_mod_3() {
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]];
        // second row = 2 * first mod 3
        assert_eq!(rank(&rows, 3), 2);
        assert_eq!(rank(&[], 3), 0);
    }

    #[test]
    fn annihilator_is_orthogonal_complement() {
        let rows = vec![vec![1, 1, 0, 1], vec![0, 1, 1, 1]];
        let ann = annihilator(&rows, 4, 2);
        assert_eq!(ann.len(), 2);
        for a in &ann {
            for r in &rows {
                assert_eq!(dot(a, r, 2), 0);
            }
        }
        assert_eq!(rank(&ann, 2), 2);
        assert_eq!(annihilator(&[], 3, 5).len(), 3);
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new(3, 5);
        assert!(e.insert(&[1, 2, 3]));
        assert!(!e.insert(&[2, 4, 1]));
        assert!(e.contains(&[3, 1, 4]));
        assert!(e.insert(&[0, 0, 1]));
        assert_eq!(e.rank(), 2);
    }
}
