//! Exact integer linear algebra on small dense matrices.

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Gram matrix of `vectors` under `form`.
pub fn gram<T>(vectors: &[T], form: impl Fn(&T, &T) -> i64) -> Vec<Vec<i64>> {
    vectors.iter().map(|u| vectors.iter().map(|v| form(u, v)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] as i128 * naive(&minor)
            })
            .sum()
    }

    #[test]
    fn matches_cofactor_expansion() {
        let m = vec![vec![0, 2, -1, 3], vec![1, 0, 4, 2], vec![5, -2, 0, 1], vec![2, 2, 2, 0]];
        assert_eq!(determinant(&m), naive(&m));
        let singular = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(determinant(&singular), 0);
    }

    proptest::proptest! {
        #[test]
        fn bareiss_agrees_with_expansion(v in proptest::collection::vec(-5i64..=5, 25)) {
            let m: Vec<Vec<i64>> = v.chunks(5).map(|c| c.to_vec()).collect();
            proptest::prop_assert_eq!(determinant(&m), naive(&m));
        }
    }
}
