use num_traits::Zero;

use super::{ChevalleyAlgebra, WeightModule};
use crate::error::{LefError, Result};
use crate::exact::{ExactMatrix, ExactScalar, SparseMatrix};
use crate::rootsys::FormNormalization;

/// Gram matrix on the algebra basis of the chosen invariant form. The
/// short-root-2 form is the multiple of the Killing form whose dual gives
/// short roots squared length 2.
pub fn invariant_form_gram(alg: &ChevalleyAlgebra, norm: FormNormalization) -> ExactMatrix {
    let killing = alg.killing_form();
    match norm {
        FormNormalization::Killing => killing,
        FormNormalization::ShortRootTwo => {
            let datum = alg.datum();
            if datum.rank() == 0 {
                return killing;
            }
            let short = (0..datum.rank()).min_by_key(|&i| datum.symmetrizer()[i]).unwrap();
            let alpha = datum.simple_root(short);
            let k = datum.with_normalization(FormNormalization::Killing);
            let c = k.weight_norm(&alpha) / crate::exact::int(2);
            killing.scale(&c)
        }
    }
}

/// `Σ_i ρ(X_i) ρ(Y_i)` with `{Y_i}` dual to the basis under the chosen form.
pub fn casimir_operator(
    alg: &ChevalleyAlgebra,
    module: &WeightModule,
    norm: FormNormalization,
) -> Result<SparseMatrix> {
    let g = invariant_form_gram(alg, norm);
    let ginv = g.inverse().ok_or(LefError::DegenerateForm)?;
    let d = alg.dimension();
    let dim = module.dimension();
    let mut c = SparseMatrix::zeros(dim, dim);
    for i in 0..d {
        for k in 0..d {
            let coef = ginv.get(k, i);
            if coef.is_zero() {
                continue;
            }
            c = c.add(&module.action(i).mul(module.action(k)).scale(coef));
        }
    }
    Ok(c)
}

/// Scalar by which the Casimir operator acts on the irreducible module.
pub fn casimir_eigenvalue(
    alg: &ChevalleyAlgebra,
    module: &WeightModule,
    norm: FormNormalization,
) -> Result<ExactScalar> {
    let c = casimir_operator(alg, module, norm)?;
    let first = c.get(0, 0);
    if c != SparseMatrix::diagonal(&vec![first.clone(); module.dimension()]) {
        return Err(LefError::NotScalar);
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{build_chevalley_algebra, highest_weight_module};
    use crate::exact::{frac, int};
    use crate::rootsys::build_root_system;

    #[test]
    fn a1_examples() {
        let g = build_chevalley_algebra(&build_root_system("A1").unwrap()).unwrap();
        let k = FormNormalization::Killing;
        let triv = highest_weight_module(&g, &[0]).unwrap();
        assert_eq!(casimir_eigenvalue(&g, &triv, k).unwrap(), int(0));
        let adj = highest_weight_module(&g, &[2]).unwrap();
        assert_eq!(casimir_eigenvalue(&g, &adj, k).unwrap(), int(1));
        let def = highest_weight_module(&g, &[1]).unwrap();
        assert_eq!(casimir_eigenvalue(&g, &def, k).unwrap(), frac(3, 8));
        // short-root-2: (λ+ρ,λ+ρ)-(ρ,ρ) with (α,α)=2 gives 4 on the adjoint
        assert_eq!(casimir_eigenvalue(&g, &adj, FormNormalization::ShortRootTwo).unwrap(), int(4));
    }

    #[test]
    fn matches_eigenvalue_formula() {
        for label in ["A1", "A2", "B2"] {
            let datum = build_root_system(label).unwrap();
            let g = build_chevalley_algebra(&datum).unwrap();
            let n = datum.rank();
            for norm in [FormNormalization::Killing, FormNormalization::ShortRootTwo] {
                let d = datum.with_normalization(norm);
                let rho = d.rho();
                for code in 0..3usize.pow(n as u32) {
                    let lam: Vec<i64> = (0..n).map(|j| ((code / 3usize.pow(j as u32)) % 3) as i64).collect();
                    let m = highest_weight_module(&g, &lam).unwrap();
                    let lr: Vec<i64> = lam.iter().zip(&rho).map(|(a, b)| a + b).collect();
                    let expected = d.weight_norm(&lr) - d.weight_norm(&rho);
                    assert_eq!(casimir_eigenvalue(&g, &m, norm).unwrap(), expected, "{label} {lam:?}");
                }
            }
        }
    }
}
