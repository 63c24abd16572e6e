//! Integer linear algebra for the affine realizations: lattice membership via a
//! row-echelon (Hermite-style) basis, exact determinants, and the supporting
//! hyperplanes of a rational polyhedral cone.

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0, |acc, &v| gcd(acc, v))
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides out the content of `v`; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_all(v);
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|c| c / g).collect()
    }
}

/// A full or partial sublattice of `ℤ^d`, stored as an echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl IntLattice {
    pub fn generated_by(gens: &[Vec<i64>], dim: usize) -> Self {
        let mut rows: Vec<Vec<i64>> = gens
            .iter()
            .filter(|g| g.iter().any(|&c| c != 0))
            .cloned()
            .collect();
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..dim {
            loop {
                // row with the smallest nonzero entry in `col`
                let best = rows
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r[col] != 0)
                    .min_by_key(|(_, r)| r[col].abs())
                    .map(|(i, _)| i);
                let Some(best) = best else { break };
                let pivot = rows[best].clone();
                for (i, row) in rows.iter_mut().enumerate() {
                    if i == best || row[col] == 0 {
                        continue;
                    }
                    let q = row[col].div_euclid(pivot[col]);
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x -= q * p;
                    }
                }
                if rows.iter().enumerate().all(|(i, r)| i == best || r[col] == 0) {
                    let mut pivot = rows.swap_remove(best);
                    if pivot[col] < 0 {
                        pivot.iter_mut().for_each(|x| *x = -*x);
                    }
                    basis.push(pivot);
                    pivots.push(col);
                    rows.retain(|r| r.iter().any(|&c| c != 0));
                    break;
                }
            }
        }
        IntLattice { dim, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut rest = v.to_vec();
        for (row, &col) in self.basis.iter().zip(&self.pivots) {
            if rest[col] % row[col] != 0 {
                return false;
            }
            let q = rest[col] / row[col];
            for (x, b) in rest.iter_mut().zip(row) {
                *x -= q * b;
            }
        }
        rest.iter().all(|&c| c == 0)
    }

    /// True when the lattice is all of `ℤ^d`.
    pub fn is_standard(&self) -> bool {
        self.rank() == self.dim
            && self
                .basis
                .iter()
                .zip(&self.pivots)
                .all(|(row, &col)| row[col] == 1)
    }
}

/// Exact determinant of a square integer matrix (Bareiss elimination).
pub fn determinant(matrix: &[Vec<i64>]) -> i64 {
    let n = matrix.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Cofactor normal of `d-1` vectors in `ℤ^d`: orthogonal to each row, zero
/// when the rows are dependent.
pub fn cofactor_normal(rows: &[Vec<i64>], dim: usize) -> Vec<i64> {
    (0..dim)
        .map(|skip| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != skip)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let det = determinant(&minor);
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Primitive inner normals of the facets of the cone spanned by `gens`.
///
/// Requires the generators to span `ℚ^d`. A cone equal to the whole space has
/// no facets. Normals are returned sorted and deduplicated.
pub fn cone_facets(gens: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut facets: Vec<Vec<i64>> = Vec::new();
    for combo in combinations(gens.len(), dim.saturating_sub(1)) {
        let rows: Vec<Vec<i64>> = combo.iter().map(|&i| gens[i].clone()).collect();
        let normal = primitive(&cofactor_normal(&rows, dim));
        if normal.iter().all(|&c| c == 0) {
            continue;
        }
        let values: Vec<i64> = gens.iter().map(|g| dot(&normal, g)).collect();
        let oriented = if values.iter().all(|&v| v >= 0) {
            normal
        } else if values.iter().all(|&v| v <= 0) {
            normal.iter().map(|c| -c).collect()
        } else {
            continue;
        };
        // a supporting hyperplane that contains every generator is not a facet
        if gens.iter().all(|g| dot(&oriented, g) == 0) {
            continue;
        }
        if !facets.contains(&oriented) {
            facets.push(oriented);
        }
    }
    facets.sort();
    facets
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_lattice() {
        let l = IntLattice::generated_by(&[vec![1, 0], vec![0, 1]], 2);
        assert!(l.is_standard());
        assert!(l.contains(&[-3, 7]));
    }

    #[test]
    fn index_two_lattice() {
        let l = IntLattice::generated_by(&[vec![2, 0], vec![1, 1]], 2);
        assert_eq!(l.rank(), 2);
        assert!(!l.is_standard());
        assert!(l.contains(&[3, 1]));
        assert!(!l.contains(&[1, 0]));
    }

    #[test]
    fn redundant_generators_reduce() {
        let l = IntLattice::generated_by(&[vec![4, 6], vec![6, 9], vec![0, 1]], 2);
        assert!(l.contains(&[2, 0]));
        assert!(!l.contains(&[1, 0]));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]),
            -3
        );
    }

    #[test]
    fn quadrant_facets() {
        let f = cone_facets(&[vec![1, 0], vec![0, 1]], 2);
        assert_eq!(f, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn half_plane_has_one_facet() {
        let f = cone_facets(&[vec![1, 0], vec![0, 1], vec![0, -1]], 2);
        assert_eq!(f, vec![vec![1, 0]]);
    }

    #[test]
    fn whole_plane_has_no_facets() {
        let f = cone_facets(&[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]], 2);
        assert!(f.is_empty());
    }

    #[test]
    fn octant_facets() {
        let f = cone_facets(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 3);
        assert_eq!(f.len(), 3);
    }
}
