#![allow(dead_code)]

use std::sync::Arc;

use fibkit::corpus;
use fibkit::{Arr, CatBuilder, FinCat, FinFunctor, NatTrans, Obj};

/// One-object category on `0..n` with unit `0` and the given product.
pub fn monoid(name: &str, table: &[Vec<usize>]) -> Arc<FinCat> {
    let n = table.len();
    let mut b = CatBuilder::new(name);
    let x = b.object("*").unwrap();
    let arrows: Vec<Arr> = (0..n).map(|i| b.arrow(format!("m{i}"), x, x).unwrap()).collect();
    b.set_identity(x, arrows[0]);
    for g in 0..n {
        for f in 0..n {
            b.set_compose(arrows[g], arrows[f], arrows[table[g][f]]);
        }
    }
    Arc::new(b.build().unwrap())
}

/// Every monoid table on `0..n` with unit `0`.
pub fn monoid_tables(n: usize) -> Vec<Vec<Vec<usize>>> {
    let free = (n - 1) * (n - 1);
    let mut out = Vec::new();
    for code in 0..n.pow(free as u32) {
        let mut t = vec![vec![0; n]; n];
        let mut c = code;
        for (g, row) in t.iter_mut().enumerate() {
            for (f, v) in row.iter_mut().enumerate() {
                if g == 0 {
                    *v = f;
                } else if f == 0 {
                    *v = g;
                } else {
                    *v = c % n;
                    c /= n;
                }
            }
        }
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])));
        if assoc {
            out.push(t);
        }
    }
    out
}

/// The preorder on `n` objects generated by the relation bits
/// (`bit i*n+j` meaning `i ≤ j`).
pub fn preorder(n: usize, bits: u32) -> Arc<FinCat> {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && bits >> (i * n + j) & 1 == 1 {
                covers.push((refs[i], refs[j]));
            }
        }
    }
    corpus::poset(&format!("P{n}_{bits}"), &refs, &covers)
}

/// Categories with at most three objects and eight arrows.
pub fn desk_categories() -> Vec<Arc<FinCat>> {
    let mut out = corpus::small_categories();
    out.push(corpus::two_plus_two());
    for n in 2..=3 {
        for (i, t) in monoid_tables(n).iter().enumerate() {
            out.push(monoid(&format!("M{n}_{i}"), t));
        }
    }
    for bits in [0b000_000_110, 0b000_100_010, 0b011_000_000, 0b000_001_010, 0b100_000_010] {
        out.push(preorder(3, bits));
    }
    let ops: Vec<Arc<FinCat>> = out.iter().map(|c| Arc::new(c.opposite())).collect();
    out.extend(ops);
    out.retain(|c| c.n_objects() <= 3 && c.n_arrows() <= 8);
    out
}

/// Every functor `c → d`, by trying every object map and every arrow map
/// within the matching hom-sets, then checking the laws.
pub fn naive_functors(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Vec<(Vec<Obj>, Vec<Arr>)> {
    let mut out = Vec::new();
    let n = c.n_objects();
    for code in 0..d.n_objects().pow(n as u32) {
        let mut k = code;
        let obj: Vec<Obj> = (0..n)
            .map(|_| {
                let v = k % d.n_objects();
                k /= d.n_objects();
                Obj(v)
            })
            .collect();
        let choices: Vec<Vec<Arr>> =
            c.arrows().map(|f| d.hom(obj[c.src(f).0], obj[c.tgt(f).0]).to_vec()).collect();
        let mut idx = vec![0usize; c.n_arrows()];
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            let arr: Vec<Arr> = idx.iter().zip(&choices).map(|(&i, ch)| ch[i]).collect();
            let ids = c.objects().all(|x| arr[c.identity(x).0] == d.identity(obj[x.0]));
            let comp = c.composable_pairs().all(|(g, f)| arr[c.compose(g, f).0] == d.compose(arr[g.0], arr[f.0]));
            if ids && comp {
                out.push((obj.clone(), arr));
            }
            let mut i = 0;
            while i < idx.len() {
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                break;
            }
        }
    }
    out.sort();
    out
}

/// Every family of components `F x → G x`, kept when all naturality squares
/// commute.
pub fn naive_nat_trans(f: &FinFunctor, g: &FinFunctor) -> Vec<Vec<Arr>> {
    let (c, d) = (f.dom(), f.cod());
    let choices: Vec<Vec<Arr>> = c.objects().map(|x| d.hom(f.obj(x), g.obj(x)).to_vec()).collect();
    if choices.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let total: usize = choices.iter().map(Vec::len).product();
    let mut out = Vec::new();
    for code in 0..total {
        let mut k = code;
        let comps: Vec<Arr> = choices
            .iter()
            .map(|ch| {
                let v = ch[k % ch.len()];
                k /= ch.len();
                v
            })
            .collect();
        let natural = c
            .arrows()
            .all(|a| d.compose(g.arr(a), comps[c.src(a).0]) == d.compose(comps[c.tgt(a).0], f.arr(a)));
        if natural {
            out.push(comps);
        }
    }
    out.sort();
    out
}

pub fn functor(c: &Arc<FinCat>, d: &Arc<FinCat>, t: &(Vec<Obj>, Vec<Arr>)) -> FinFunctor {
    FinFunctor::new(c.clone(), d.clone(), t.0.clone(), t.1.clone()).unwrap()
}

pub fn nat(f: &FinFunctor, g: &FinFunctor, comps: &[Arr]) -> NatTrans {
    NatTrans::new(f.clone(), g.clone(), comps.to_vec()).unwrap()
}
