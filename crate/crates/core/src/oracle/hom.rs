//! Natural transformations between grid modules, found as the solution space
//! of the commuting-square equations.

use super::grid::GridModule;
use super::linalg::{BitVec, Echelon, Matrix};
use super::{OracleError, MAX_END_DIMENSION, MAX_HOM_DIMENSION, MAX_HOM_UNKNOWNS, MAX_SPLIT_DIMENSION};

/// One matrix per grid point, `N(p) x M(p)`.
pub type Morphism = Vec<Matrix>;

fn same_grid(a: &GridModule, b: &GridModule) -> Result<(), OracleError> {
    if (a.m(), a.n()) != (b.m(), b.n()) {
        return Err(OracleError::ExtentMismatch {
            left: (a.m(), a.n()),
            right: (b.m(), b.n()),
        });
    }
    Ok(())
}

/// A basis of `Hom(M, N)`.
pub fn hom_space(m: &GridModule, n: &GridModule) -> Result<Vec<Morphism>, OracleError> {
    same_grid(m, n)?;
    let (dm, dn) = (m.dims(), n.dims());
    let mut offsets = Vec::with_capacity(dm.len() + 1);
    offsets.push(0);
    for p in 0..dm.len() {
        offsets.push(offsets[p] + dm[p] * dn[p]);
    }
    let unknowns = offsets[dm.len()];
    if unknowns > MAX_HOM_UNKNOWNS {
        return Err(OracleError::BudgetExceeded {
            what: "hom unknowns",
            limit: MAX_HOM_UNKNOWNS,
            actual: unknowns,
        });
    }
    // unknown for entry (i, j) of phi_p
    let var = |p: usize, i: usize, j: usize| offsets[p] + i * dm[p] + j;

    let mut equations = Echelon::new(unknowns);
    let arrows_m = m.arrows();
    let arrows_n = n.arrows();
    for ((p, q, _, a_m), (_, _, _, a_n)) in arrows_m.iter().zip(&arrows_n) {
        let (p, q) = (*p, *q);
        // N(p->q) phi_p + phi_q M(p->q) = 0, entry (i, j)
        for i in 0..dn[q] {
            for j in 0..dm[p] {
                let mut row = BitVec::zeros(unknowns);
                for k in a_n.row(i).ones() {
                    row.toggle(var(p, k, j));
                }
                for l in 0..dm[q] {
                    if a_m.get(l, j) {
                        row.toggle(var(q, i, l));
                    }
                }
                if !row.is_zero() {
                    equations.insert(row);
                }
            }
        }
    }
    Ok(equations
        .nullspace()
        .into_iter()
        .map(|x| {
            (0..dm.len())
                .map(|p| {
                    let mut phi = Matrix::zeros(dn[p], dm[p]);
                    for i in 0..dn[p] {
                        for j in 0..dm[p] {
                            if x.get(var(p, i, j)) {
                                phi.set(i, j, true);
                            }
                        }
                    }
                    phi
                })
                .collect()
        })
        .collect())
}

/// Calls `visit` on every linear combination of `basis`, in Gray-code order,
/// until it returns `true`.
fn any_combination(basis: &[Morphism], mut visit: impl FnMut(&Morphism) -> bool) -> bool {
    let Some(first) = basis.first() else {
        return false;
    };
    let mut current: Morphism = first.iter().map(|a| Matrix::zeros(a.num_rows(), a.num_cols())).collect();
    if visit(&current) {
        return true;
    }
    for step in 1u64..(1u64 << basis.len()) {
        let flip = step.trailing_zeros() as usize;
        for (c, b) in current.iter_mut().zip(&basis[flip]) {
            *c = c.add(b);
        }
        if visit(&current) {
            return true;
        }
    }
    false
}

/// Some element of `Hom(M, N)` is invertible at every point.
pub fn are_isomorphic(m: &GridModule, n: &GridModule) -> Result<bool, OracleError> {
    same_grid(m, n)?;
    if m.dimension_function() != n.dimension_function() {
        return Ok(false);
    }
    if m.total_dimension() == 0 {
        return Ok(true);
    }
    let basis = hom_space(m, n)?;
    if basis.len() > MAX_HOM_DIMENSION {
        return Err(OracleError::BudgetExceeded {
            what: "hom dimension",
            limit: MAX_HOM_DIMENSION,
            actual: basis.len(),
        });
    }
    Ok(any_combination(&basis, |phi| phi.iter().all(Matrix::is_invertible)))
}

/// Exhaustive check: split along idempotent endomorphisms until every piece
/// is indecomposable, then test that each piece is an interval module.
pub fn is_interval_decomposable_bruteforce(m: &GridModule) -> Result<bool, OracleError> {
    if m.total_dimension() > MAX_SPLIT_DIMENSION {
        return Err(OracleError::BudgetExceeded {
            what: "total dimension",
            limit: MAX_SPLIT_DIMENSION,
            actual: m.total_dimension(),
        });
    }
    split_into_intervals(m)
}

fn split_into_intervals(m: &GridModule) -> Result<bool, OracleError> {
    if m.total_dimension() == 0 {
        return Ok(true);
    }
    let basis = hom_space(m, m)?;
    if basis.len() > MAX_END_DIMENSION {
        return Err(OracleError::BudgetExceeded {
            what: "endomorphism dimension",
            limit: MAX_END_DIMENSION,
            actual: basis.len(),
        });
    }
    let dims = m.dims();
    let mut proper = None;
    any_combination(&basis, |e| {
        let idempotent = e.iter().all(|a| &a.mul(a) == a);
        let zero = e.iter().all(Matrix::is_zero);
        let identity = e.iter().zip(dims).all(|(a, &d)| *a == Matrix::identity(d));
        if idempotent && !zero && !identity {
            proper = Some(e.clone());
            true
        } else {
            false
        }
    });
    let Some(e) = proper else {
        return Ok(m.is_interval_module());
    };
    let complement: Morphism = e
        .iter()
        .zip(dims)
        .map(|(a, &d)| a.add(&Matrix::identity(d)))
        .collect();
    let image = |f: &Morphism| -> GridModule {
        let bases: Vec<Matrix> = f.iter().map(Matrix::column_space).collect();
        m.submodule(&bases)
    };
    Ok(split_into_intervals(&image(&e))? && split_into_intervals(&image(&complement))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grade::{Bar, Bigrade};
    use crate::graphcode::Graphcode;
    use crate::oracle::{module_from_graphcode, module_from_presentation};
    use crate::presentation::{Presentation, Relation};

    fn interval(m: u32, b: u32, d: u32) -> GridModule {
        let g = Graphcode::new(m, 1, vec![Bar::new(b, d, 1)], vec![]).unwrap();
        module_from_graphcode(&g).unwrap()
    }

    #[test]
    fn hom_between_one_parameter_intervals() {
        // nonzero exactly when the target is entangled with the source
        assert_eq!(hom_space(&interval(5, 3, 5), &interval(5, 2, 4)).unwrap().len(), 1);
        assert_eq!(hom_space(&interval(5, 1, 2), &interval(5, 3, 4)).unwrap().len(), 0);
        assert_eq!(hom_space(&interval(6, 3, 5), &interval(6, 2, 6)).unwrap().len(), 0);
        assert_eq!(hom_space(&interval(5, 2, 4), &interval(5, 3, 5)).unwrap().len(), 0);
    }

    #[test]
    fn endomorphisms_contain_identity() {
        let a = interval(4, 1, 3);
        assert_eq!(hom_space(&a, &a).unwrap().len(), 1);
        assert!(are_isomorphic(&a, &a).unwrap());
        assert!(!are_isomorphic(&a, &interval(4, 1, 4)).unwrap());
    }

    #[test]
    fn presentation_and_graphcode_of_a_path_agree() {
        let g = Graphcode::new(3, 2, vec![Bar::new(1, 3, 1), Bar::new(1, 2, 2)], vec![(0, 1)]).unwrap();
        let p = Presentation::with_extents(
            3,
            2,
            vec![Bigrade::new(1, 1)],
            vec![
                Relation::new(Bigrade::new(3, 1), [0].into_iter().collect()),
                Relation::new(Bigrade::new(2, 2), [0].into_iter().collect()),
            ],
        )
        .unwrap();
        let a = module_from_graphcode(&g).unwrap();
        let b = module_from_presentation(&p).unwrap();
        assert!(are_isomorphic(&a, &b).unwrap());
        assert!(are_isomorphic(&b, &a).unwrap());
    }

    #[test]
    fn bruteforce_splits_sums_of_intervals() {
        let a = interval(4, 1, 3);
        assert!(is_interval_decomposable_bruteforce(&a).unwrap());
        let s = a.direct_sum(&interval(4, 2, 5)).unwrap();
        assert!(is_interval_decomposable_bruteforce(&s).unwrap());
    }

    #[test]
    fn bruteforce_rejects_three_lines_in_a_plane() {
        // three generators on an antichain meeting in a two-dimensional space
        let gens = vec![Bigrade::new(1, 3), Bigrade::new(2, 2), Bigrade::new(3, 1)];
        let rel = Relation::new(Bigrade::new(3, 3), [0, 1, 2].into_iter().collect());
        let p = Presentation::new(gens, vec![rel]).unwrap();
        let module = module_from_presentation(&p).unwrap();
        assert_eq!(module.dimension_function().dims, vec![0, 0, 1, 0, 1, 2, 1, 2, 2]);
        assert!(!is_interval_decomposable_bruteforce(&module).unwrap());
    }
}
