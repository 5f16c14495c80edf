use super::{xgcd, ModVector, Modulus};

/// Row-reduces `rows` (all of length `ncols`) into Howell normal form and
/// drops zero rows. Two generating sets span the same submodule iff their
/// Howell forms are identical.
pub fn howell_form(rows: &[ModVector], ncols: usize, d: Modulus) -> Vec<ModVector> {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % d.get()).collect()).collect();
    let mut r = 0;
    for c in 0..ncols {
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            if r >= a.len() {
                break;
            }
            if a[r][c] == 0 {
                a.swap(r, i);
                continue;
            }
            let (x, y) = (a[r][c] as i128, a[i][c] as i128);
            let (g, s, t) = xgcd(x, y);
            let (u, v) = (x / g, y / g);
            let (s, t, u, v) = (d.reduce(s), d.reduce(t), d.reduce(u), d.reduce(-v));
            for j in c..ncols {
                let (p, q) = (a[r][j], a[i][j]);
                a[r][j] = d.add(d.mul(s, p), d.mul(t, q));
                a[i][j] = d.add(d.mul(v, p), d.mul(u, q));
            }
        }
        if r >= a.len() || a[r][c] == 0 {
            continue;
        }
        let unit = d.normalizing_unit(a[r][c]);
        for j in c..ncols {
            a[r][j] = d.mul(a[r][j], unit);
        }
        let g = a[r][c];
        for i in 0..r {
            let k = a[i][c] / g;
            if k != 0 {
                for j in c..ncols {
                    a[i][j] = d.sub(a[i][j], d.mul(k, a[r][j]));
                }
            }
        }
        // The annihilator multiple of the pivot row vanishes in column c; feeding
        // it back keeps every lower-left zero pattern generated by later rows.
        let ann = d.get() / g;
        if ann != d.get() {
            let extra: Vec<u64> = a[r].iter().map(|&x| d.mul(x, ann)).collect();
            if extra.iter().any(|&x| x != 0) {
                a.push(extra);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.into_iter().filter(|row| row.iter().any(|&x| x != 0)).map(ModVector).collect()
}

/// Basis (Howell form) of `{x : M x = 0}` where `M` has the given rows of length `ncols`.
pub fn kernel(rows: &[ModVector], ncols: usize, d: Modulus) -> Vec<ModVector> {
    let m = rows.len();
    let aug: Vec<ModVector> = (0..ncols)
        .map(|j| {
            let mut v: Vec<u64> = rows.iter().map(|r| r[j]).collect();
            v.extend((0..ncols).map(|k| u64::from(k == j)));
            ModVector(v)
        })
        .collect();
    let h = howell_form(&aug, m + ncols, d);
    let gens: Vec<ModVector> = h
        .into_iter()
        .filter(|r| r[..m].iter().all(|&x| x == 0))
        .map(|r| ModVector(r[m..].to_vec()))
        .collect();
    howell_form(&gens, ncols, d)
}

/// Finds coefficients `c` with `sum_i c_i * gens[i] = target`, if any exist.
pub fn solve_combination(gens: &[ModVector], target: &ModVector, d: Modulus) -> Option<Vec<u64>> {
    let m = target.len();
    let k = gens.len();
    let aug: Vec<ModVector> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut v = g.to_vec();
            v.extend((0..k).map(|j| u64::from(i == j)));
            ModVector(v)
        })
        .collect();
    let h = howell_form(&aug, m + k, d);
    let mut x: Vec<u64> = target.to_vec();
    x.extend(std::iter::repeat(0).take(k));
    for row in &h {
        let Some(c) = row.iter().position(|&e| e != 0) else { continue };
        if c >= m {
            break;
        }
        let g = row[c];
        if x[c] % g != 0 {
            return None;
        }
        let q = x[c] / g;
        for j in c..m + k {
            x[j] = d.sub(x[j], d.mul(q, row[j]));
        }
    }
    if x[..m].iter().any(|&e| e != 0) {
        return None;
    }
    Some(x[m..].iter().map(|&e| d.neg(e)).collect())
}
