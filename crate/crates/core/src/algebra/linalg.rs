/// Basis of the right kernel of a matrix over `F_p`, given as columns.
///
/// `columns[j]` is the image of the `j`-th basis vector; all columns have
/// the same length. Returned vectors have length `columns.len()`.
pub fn kernel_mod_p(columns: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let ncols = columns.len();
    if ncols == 0 {
        return vec![];
    }
    let nrows = columns[0].len();
    // row-major copy
    let mut m: Vec<Vec<u64>> = (0..nrows)
        .map(|i| columns.iter().map(|c| c[i] % p).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = inv_mod(m[row][col], p);
        for v in m[row].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..nrows {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                let (src, dst) = if r < row {
                    let (a, b) = m.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = (*d + p - f * s % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; ncols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][fc]) % p;
            }
            v
        })
        .collect()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}
