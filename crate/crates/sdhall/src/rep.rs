//! Finite-dimensional quiver representations over `F_p` and their
//! morphisms, subobjects, quotients and extensions.
//!
//! Conventions: vectors are columns; the arrow matrix `X_a` of a
//! representation has shape `d_{t(a)} x d_{s(a)}`; a morphism `f: X -> Y`
//! is a tuple of vertex matrices with `f_{t(a)} X_a = Y_a f_{s(a)}`.
//! Subspaces are passed around as reduced-echelon row-basis matrices.

use crate::finfield::{enumerate_vectors, FpMatrix};
use crate::quiver::QuiverSpec;

/// A representation: dimension vector plus one matrix per arrow.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub mats: Vec<FpMatrix>,
}

/// A morphism between representations: one matrix per vertex.
pub type Morphism = Vec<FpMatrix>;

impl Rep {
    pub fn zero(spec: &QuiverSpec, p: u32, dims: Vec<usize>) -> Rep {
        let mats = spec
            .arrows
            .iter()
            .map(|&(s, t)| FpMatrix::zero(p, dims[t], dims[s]))
            .collect();
        Rep { dims, mats }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero_object(&self) -> bool {
        self.total_dim() == 0
    }

    /// Flat entry encoding; only comparable between reps of equal dims.
    pub fn encode(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for m in &self.mats {
            out.extend_from_slice(m.entries());
        }
        out
    }

    pub fn direct_sum(&self, other: &Rep, spec: &QuiverSpec) -> Rep {
        let dims: Vec<usize> =
            self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = spec
            .arrows
            .iter()
            .enumerate()
            .map(|(a, _)| self.mats[a].block_diag(&other.mats[a]))
            .collect();
        Rep { dims, mats }
    }
}

/// `g . rep` where `g` is an invertible vertex-matrix tuple with
/// precomputed inverses: each arrow matrix becomes `g_t X_a g_s^{-1}`.
pub fn transform_rep(spec: &QuiverSpec, rep: &Rep, g: &[FpMatrix], g_inv: &[FpMatrix]) -> Rep {
    let mats = spec
        .arrows
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| g[t].mul(&rep.mats[a]).mul(&g_inv[s]))
        .collect();
    Rep { dims: rep.dims.clone(), mats }
}

/// All representations with the given dimension vector (every assignment
/// of arrow matrices).  The caller is responsible for budget checks.
pub fn enumerate_reps(spec: &QuiverSpec, p: u32, dims: &[usize]) -> Vec<Rep> {
    let shapes: Vec<(usize, usize)> =
        spec.arrows.iter().map(|&(s, t)| (dims[t], dims[s])).collect();
    let total: usize = shapes.iter().map(|&(r, c)| r * c).sum();
    let mut out = Vec::new();
    for flat in enumerate_vectors(total, p) {
        let mut mats = Vec::with_capacity(shapes.len());
        let mut off = 0;
        for &(r, c) in &shapes {
            let mut m = FpMatrix::zero(p, r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, flat[off]);
                    off += 1;
                }
            }
            mats.push(m);
        }
        out.push(Rep { dims: dims.to_vec(), mats });
    }
    out
}

pub fn mat_vec(m: &FpMatrix, v: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; m.rows];
    for i in 0..m.rows {
        let mut acc = 0;
        for j in 0..m.cols {
            acc = (acc + m.get(i, j) * v[j]) % m.p;
        }
        out[i] = acc;
    }
    out
}

/// Basis of `Hom(x, y)` as a list of vertex-matrix tuples.
pub fn hom_basis(spec: &QuiverSpec, p: u32, x: &Rep, y: &Rep) -> Vec<Morphism> {
    // Unknowns: entries of f_i (shape y.dims[i] x x.dims[i]), flattened
    // vertex by vertex.  One linear equation per entry of
    // f_t X_a - Y_a f_s per arrow a.
    let n = spec.vertices;
    let mut offsets = vec![0usize; n + 1];
    for i in 0..n {
        offsets[i + 1] = offsets[i] + y.dims[i] * x.dims[i];
    }
    let unknowns = offsets[n];
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (a, &(s, t)) in spec.arrows.iter().enumerate() {
        let xa = &x.mats[a];
        let ya = &y.mats[a];
        for r in 0..y.dims[t] {
            for c in 0..x.dims[s] {
                let mut row = vec![0u32; unknowns];
                // (f_t X_a)[r][c] = sum_k f_t[r][k] X_a[k][c]
                for k in 0..x.dims[t] {
                    let idx = offsets[t] + r * x.dims[t] + k;
                    row[idx] = (row[idx] + xa.get(k, c)) % p;
                }
                // -(Y_a f_s)[r][c] = -sum_k Y_a[r][k] f_s[k][c]
                for k in 0..y.dims[s] {
                    let idx = offsets[s] + k * x.dims[s] + c;
                    row[idx] = (row[idx] + (p - ya.get(r, k)) % p) % p;
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        // No constraints: the full matrix space.
        FpMatrix::zero(p, 1, unknowns).kernel_basis()
    } else {
        FpMatrix::from_rows(p, &rows).kernel_basis()
    };
    kernel
        .into_iter()
        .map(|flat| {
            (0..n)
                .map(|i| {
                    let mut f = FpMatrix::zero(p, y.dims[i], x.dims[i]);
                    for r in 0..y.dims[i] {
                        for c in 0..x.dims[i] {
                            f.set(r, c, flat[offsets[i] + r * x.dims[i] + c]);
                        }
                    }
                    f
                })
                .collect()
        })
        .collect()
}

pub fn identity_morphism(p: u32, dims: &[usize]) -> Morphism {
    dims.iter().map(|&d| FpMatrix::identity(p, d)).collect()
}

/// `g` after `f` (composition `g . f`), vertexwise products.
pub fn compose(g: &Morphism, f: &Morphism) -> Morphism {
    g.iter().zip(f).map(|(gi, fi)| gi.mul(fi)).collect()
}

pub fn morphism_is_iso(f: &Morphism) -> bool {
    f.iter().all(|fi| fi.is_invertible())
}

pub fn morphism_inverse(f: &Morphism) -> Option<Morphism> {
    f.iter().map(|fi| fi.inverse()).collect()
}

/// A subrepresentation described by one echelon row-basis per vertex.
pub type SubspaceTuple = Vec<FpMatrix>;

/// Is the subspace tuple closed under every arrow?
pub fn tuple_is_subrep(spec: &QuiverSpec, rep: &Rep, u: &SubspaceTuple) -> bool {
    spec.arrows.iter().enumerate().all(|(a, &(s, t))| {
        (0..u[s].rows).all(|j| {
            let img = mat_vec(&rep.mats[a], u[s].row(j));
            u[t].row_span_contains(&img)
        })
    })
}

/// The subrepresentation on a closed tuple `u`, in `u`-coordinates,
/// together with the embedding morphism into `rep`.
pub fn sub_rep(spec: &QuiverSpec, rep: &Rep, u: &SubspaceTuple) -> (Rep, Morphism) {
    let p = rep.mats.first().map_or_else(|| u.first().map_or(2, |m| m.p), |m| m.p);
    let dims: Vec<usize> = u.iter().map(|m| m.rows).collect();
    let mats = spec
        .arrows
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| {
            let mut m = FpMatrix::zero(p, dims[t], dims[s]);
            for j in 0..dims[s] {
                let img = mat_vec(&rep.mats[a], u[s].row(j));
                let coeffs = u[t].solve_left(&img).expect("tuple not closed under arrows");
                for (i, &c) in coeffs.iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            m
        })
        .collect();
    let embed: Morphism = u.iter().map(|m| m.transpose()).collect();
    (Rep { dims, mats }, embed)
}

/// All subspace tuples closed under the arrows (subrepresentations),
/// enumerated deterministically.
pub fn subrep_tuples(spec: &QuiverSpec, p: u32, rep: &Rep) -> Vec<SubspaceTuple> {
    let per_vertex: Vec<Vec<FpMatrix>> = rep
        .dims
        .iter()
        .map(|&d| (0..=d).flat_map(|k| crate::finfield::enumerate_subspaces(d, k, p)).collect())
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_vertex.len()];
    'outer: loop {
        let tuple: Vec<FpMatrix> =
            idx.iter().zip(&per_vertex).map(|(&i, v)| v[i].clone()).collect();
        if tuple_is_subrep(spec, rep, &tuple) {
            out.push(tuple);
        }
        for pos in (0..idx.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < per_vertex[pos].len() {
                continue 'outer;
            }
            idx[pos] = 0;
        }
        break;
    }
    out
}

/// The quotient `rep / u`, together with the projection morphism and a
/// section picking representatives for the quotient coordinates.
pub fn quotient_rep(spec: &QuiverSpec, rep: &Rep, u: &SubspaceTuple) -> (Rep, Morphism, Morphism) {
    let p = u.first().map_or(2, |m| m.p);
    let n = spec.vertices;
    // Extend each row basis by standard basis vectors to a full basis; the
    // quotient coordinates are the coefficients on the added vectors.
    let mut projections: Vec<FpMatrix> = Vec::with_capacity(n);
    let mut sections: Vec<FpMatrix> = Vec::with_capacity(n);
    for i in 0..n {
        let d = rep.dims[i];
        let k = u[i].rows;
        let mut basis = u[i].clone();
        for e in 0..d {
            if basis.rows == d {
                break;
            }
            let mut v = vec![0u32; d];
            v[e] = 1;
            if !basis.row_span_contains(&v) {
                basis = basis.vstack(&FpMatrix::from_rows(p, &[v]));
            }
        }
        assert_eq!(basis.rows, d);
        // Coordinates of a column vector v in the row basis: the column
        // vector (basis^T)^{-1} v; the quotient keeps the last d-k coords.
        let coord = basis.transpose().inverse().expect("basis completion singular");
        let mut proj = FpMatrix::zero(p, d - k, d);
        for r in 0..d - k {
            for c in 0..d {
                proj.set(r, c, coord.get(k + r, c));
            }
        }
        // Section: quotient coordinates back to representatives.
        let mut sec = FpMatrix::zero(p, d, d - k);
        for r in 0..d - k {
            for c in 0..d {
                sec.set(c, r, basis.get(k + r, c));
            }
        }
        projections.push(proj);
        sections.push(sec);
    }
    let mats = spec
        .arrows
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| projections[t].mul(&rep.mats[a]).mul(&sections[s]))
        .collect();
    let dims: Vec<usize> = (0..n).map(|i| rep.dims[i] - u[i].rows).collect();
    (Rep { dims, mats }, projections, sections)
}

/// Echelon row-basis of the image of a morphism `f: x -> y`, per vertex.
/// Closed under arrows of `y` because `f` is a morphism.
pub fn morphism_image(f: &Morphism) -> SubspaceTuple {
    f.iter()
        .map(|fi| {
            let (mut rt, _) = fi.transpose().rref();
            let rank = rt.rank();
            let mut rows = Vec::new();
            for i in 0..rank {
                rows.push(rt.row(i).to_vec());
            }
            rt = FpMatrix::from_rows(fi.p, &rows);
            if rows.is_empty() {
                FpMatrix::zero(fi.p, 0, fi.rows)
            } else {
                rt
            }
        })
        .collect()
}

/// Echelon row-basis of the kernel of a morphism `f: x -> y`, per vertex.
/// Closed under arrows of `x` because `f` is a morphism.
pub fn morphism_kernel(f: &Morphism) -> SubspaceTuple {
    f.iter()
        .map(|fi| {
            let rows = fi.kernel_basis();
            if rows.is_empty() {
                FpMatrix::zero(fi.p, 0, fi.cols)
            } else {
                let (r, _) = FpMatrix::from_rows(fi.p, &rows).rref();
                r
            }
        })
        .collect()
}

/// Middle term of the extension of `m` by `n` attached to the cocycle
/// `z = (z_a)`, `z_a` of shape `n_{t(a)} x m_{s(a)}`: on each vertex the
/// space is `N_i + M_i` with `N` sitting as the subrepresentation, and the
/// arrow matrices are the block matrices `[[N_a, z_a], [0, M_a]]`.
pub fn extension_middle(spec: &QuiverSpec, m: &Rep, n: &Rep, z: &[FpMatrix]) -> Rep {
    let p = z.first().map_or_else(
        || m.mats.first().map_or(2, |x| x.p),
        |x| x.p,
    );
    let dims: Vec<usize> = n.dims.iter().zip(&m.dims).map(|(a, b)| a + b).collect();
    let mats = spec
        .arrows
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| {
            let mut x = FpMatrix::zero(p, dims[t], dims[s]);
            for i in 0..n.dims[t] {
                for j in 0..n.dims[s] {
                    x.set(i, j, n.mats[a].get(i, j));
                }
                for j in 0..m.dims[s] {
                    x.set(i, n.dims[s] + j, z[a].get(i, j));
                }
            }
            for i in 0..m.dims[t] {
                for j in 0..m.dims[s] {
                    x.set(n.dims[t] + i, n.dims[s] + j, m.mats[a].get(i, j));
                }
            }
            x
        })
        .collect();
    Rep { dims, mats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::enumerate_subspaces;

    fn a2_rep(p: u32, d0: usize, d1: usize, entries: &[Vec<u32>]) -> Rep {
        let spec = QuiverSpec::a2();
        let mut r = Rep::zero(&spec, p, vec![d0, d1]);
        r.mats[0] = FpMatrix::from_rows(p, entries);
        r
    }

    #[test]
    fn hom_spaces_on_a2() {
        let spec = QuiverSpec::a2();
        let p = 2;
        // S1 = (k -> 0), S2 = (0 -> k), P1 = (k -> k, identity).
        let s1 = Rep { dims: vec![1, 0], mats: vec![FpMatrix::zero(p, 0, 1)] };
        let s2 = Rep { dims: vec![0, 1], mats: vec![FpMatrix::zero(p, 1, 0)] };
        let p1 = a2_rep(p, 1, 1, &[vec![1]]);
        assert_eq!(hom_basis(&spec, p, &s1, &s2).len(), 0);
        assert_eq!(hom_basis(&spec, p, &s2, &s1).len(), 0);
        // Hom(P1, S2) = 0: the arrow of P1 is invertible while S2 vanishes
        // at the source vertex.  The socle embedding gives Hom(S2, P1) = k.
        assert_eq!(hom_basis(&spec, p, &p1, &s2).len(), 0);
        assert_eq!(hom_basis(&spec, p, &s2, &p1).len(), 1);
        assert_eq!(hom_basis(&spec, p, &p1, &s1).len(), 1);
        assert_eq!(hom_basis(&spec, p, &s1, &p1).len(), 0);
        assert_eq!(hom_basis(&spec, p, &p1, &p1).len(), 1);
        // Ext middle of S1 by S2 with nonzero cocycle is P1.
        let z = vec![FpMatrix::from_rows(p, &[vec![1]])];
        let mid = extension_middle(&spec, &s1, &s2, &z);
        assert_eq!(mid.dims, vec![1, 1]);
        assert_eq!(mid.mats[0].get(0, 0), 1);
    }

    #[test]
    fn sub_and_quotient_split_dimensions() {
        let spec = QuiverSpec::a2();
        let p = 2;
        let p1 = a2_rep(p, 1, 1, &[vec![1]]);
        // The unique proper nonzero subrep of P1 is S2 (the socle).
        let mut found = Vec::new();
        for u0 in enumerate_subspaces(1, 0, p).into_iter().chain(enumerate_subspaces(1, 1, p)) {
            for u1 in
                enumerate_subspaces(1, 0, p).into_iter().chain(enumerate_subspaces(1, 1, p))
            {
                let tuple = vec![u0.clone(), u1.clone()];
                if tuple_is_subrep(&spec, &p1, &tuple) {
                    found.push(tuple);
                }
            }
        }
        // Subreps: 0, S2, P1 (S1 is not closed: the arrow is injective).
        assert_eq!(found.len(), 3);
        for tuple in found {
            let (s, emb) = sub_rep(&spec, &p1, &tuple);
            let (q, proj, _sec) = quotient_rep(&spec, &p1, &tuple);
            assert_eq!(s.total_dim() + q.total_dim(), 2);
            // Embedding and projection are genuine morphisms.
            for (a, &(src, tgt)) in spec.arrows.iter().enumerate() {
                assert_eq!(emb[tgt].mul(&s.mats[a]), p1.mats[a].mul(&emb[src]));
                assert_eq!(q.mats[a].mul(&proj[src]), proj[tgt].mul(&p1.mats[a]));
            }
        }
    }

    #[test]
    fn image_and_kernel_of_projection() {
        let spec = QuiverSpec::discrete(1);
        let p = 3;
        let x = Rep { dims: vec![2], mats: vec![] };
        let y = Rep { dims: vec![1], mats: vec![] };
        let f: Morphism = vec![FpMatrix::from_rows(p, &[vec![1, 2]])];
        let im = morphism_image(&f);
        assert_eq!(im[0].rows, 1);
        let ker = morphism_kernel(&f);
        assert_eq!(ker[0].rows, 1);
        let (kr, _) = sub_rep(&spec, &x, &ker);
        assert_eq!(kr.dims, vec![1]);
        let _ = y;
    }
}
