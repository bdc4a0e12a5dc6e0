use crate::algebra::{is_square, Domain, FieldSpec, FqElem};

/// A 2×2 matrix over `F_q`, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[FqElem; 2]; 2]);

impl Mat2 {
    pub fn identity(f: &FieldSpec) -> Self {
        Mat2([[f.one(), f.zero()], [f.zero(), f.one()]])
    }

    pub fn scalar(f: &FieldSpec, c: FqElem) -> Self {
        Mat2([[c, f.zero()], [f.zero(), c]])
    }

    pub fn trace(&self, f: &FieldSpec) -> FqElem {
        f.add(&self.0[0][0], &self.0[1][1])
    }

    pub fn det(&self, f: &FieldSpec) -> FqElem {
        f.sub(
            &f.mul(&self.0[0][0], &self.0[1][1]),
            &f.mul(&self.0[0][1], &self.0[1][0]),
        )
    }

    pub fn mul(&self, f: &FieldSpec, other: &Mat2) -> Mat2 {
        let (x, y) = (&self.0, &other.0);
        let entry = |i: usize, j: usize| {
            f.add(&f.mul(&x[i][0], &y[0][j]), &f.mul(&x[i][1], &y[1][j]))
        };
        Mat2([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }

    pub fn is_scalar(&self) -> bool {
        self.0[0][1].index() == 0 && self.0[1][0].index() == 0 && self.0[0][0] == self.0[1][1]
    }

    /// Multiplicative order, or `None` if singular.
    pub fn order(&self, f: &FieldSpec) -> Option<usize> {
        if f.is_zero(&self.det(f)) {
            return None;
        }
        let id = Mat2::identity(f);
        let mut acc = *self;
        let mut k = 1;
        while acc != id {
            acc = acc.mul(f, self);
            k += 1;
        }
        Some(k)
    }

    /// Entries as enumeration indices, row-major.
    pub fn indices(&self) -> [[u64; 2]; 2] {
        self.0.map(|row| row.map(|c| c.index()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConjClassKind {
    Scalar,
    SplitSemisimple,
    NonsplitSemisimple,
    Nonsemisimple,
}

impl ConjClassKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConjClassKind::Scalar => "scalar",
            ConjClassKind::SplitSemisimple => "split_semisimple",
            ConjClassKind::NonsplitSemisimple => "nonsplit_semisimple",
            ConjClassKind::Nonsemisimple => "nonsemisimple",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConjClassLabel {
    pub kind: ConjClassKind,
    pub trace: FqElem,
    pub det: FqElem,
}

/// Class determined by `X² − tX + d` alone. `None` when the polynomial has
/// a repeated root, where only the matrix separates scalar from
/// nonsemisimple.
pub fn classify_charpoly(f: &FieldSpec, trace: FqElem, det: FqElem) -> Option<ConjClassKind> {
    if f.p() != 2 {
        let four = f.from_int(4);
        let disc = f.sub(&f.mul(&trace, &trace), &f.mul(&four, &det));
        return if f.is_zero(&disc) {
            None
        } else if is_square(f, disc) {
            Some(ConjClassKind::SplitSemisimple)
        } else {
            Some(ConjClassKind::NonsplitSemisimple)
        };
    }
    // even q: count roots directly
    let roots = f
        .all()
        .filter(|x| {
            let v = f.add(&f.sub(&f.mul(x, x), &f.mul(&trace, x)), &det);
            f.is_zero(&v)
        })
        .count();
    match roots {
        0 => Some(ConjClassKind::NonsplitSemisimple),
        2 => Some(ConjClassKind::SplitSemisimple),
        _ => None,
    }
}

pub fn conj_class(f: &FieldSpec, m: &Mat2) -> ConjClassLabel {
    let (trace, det) = (m.trace(f), m.det(f));
    let kind = classify_charpoly(f, trace, det).unwrap_or(if m.is_scalar() {
        ConjClassKind::Scalar
    } else {
        ConjClassKind::Nonsemisimple
    });
    ConjClassLabel { kind, trace, det }
}
