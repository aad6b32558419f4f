use gf_core::{FqElem, FqField};
use induced_modules::{FormalSum, PropOp};

use crate::{Oracle, OracleError};

/// `(a, b)` with `word = a + b T_beta` modulo the right ideal `J` generated
/// by `T_ns`, `T_beta (T_ns + 1)` and `e_chi` for `chi != 1`.
///
/// Rewrites the leftmost letter, using that `J` absorbs anything on the
/// right: a leading `T_ns` or nontrivial idempotent puts the word in `J`,
/// `e_1 - 1` and `T_h - 1` lie in `J`, `T_beta^2 = 1`,
/// `T_beta T_ns = T_beta (T_ns + 1) - T_beta`, and `T_beta` commutes past
/// idempotents and torus elements up to conjugating the character.
pub fn hecke_word_normal_form(k: &FqField, word: &[PropOp], max_len: usize) -> Result<(FqElem, FqElem), OracleError> {
    if word.len() > max_len {
        return Err(OracleError::WordTooLong { len: word.len(), max: max_len });
    }
    let zero = (FqElem::ZERO, FqElem::ZERO);
    let mut sign = FqElem::ONE;
    let mut after_beta = false;
    for &letter in word {
        match (after_beta, letter) {
            (false, PropOp::Tns) => return Ok(zero),
            (_, PropOp::E(chi)) if !chi.is_trivial() => return Ok(zero),
            (_, PropOp::E(_)) | (_, PropOp::Th(..)) => {}
            (_, PropOp::Tbeta) => after_beta = !after_beta,
            (true, PropOp::Tns) => sign = k.neg(sign),
        }
    }
    Ok(if after_beta { (FqElem::ZERO, sign) } else { (sign, FqElem::ZERO) })
}

impl Oracle {
    /// Checks a normal form against the module: `[id] . word` against
    /// `a [id] + b [beta]`, and `[beta] . word = [id] . (T_beta word)` against
    /// the normal form of `T_beta word`. Returns the two quotient equalities.
    pub fn validate_normal_form(&self, word: &[PropOp]) -> Result<(bool, bool), OracleError> {
        let ind = self.induced();
        let k = self.field();
        let id = FormalSum::delta(ind.iz(), 0);
        let beta = ind.delta_at(ind.iz(), &ind.tree().beta())?;
        let expected = |(a, b): (FqElem, FqElem)| id.scale(k, a).axpy(k, b, &beta);

        let (a, b) = hecke_word_normal_form(k, word, usize::MAX)?;
        let on_id = self.act_word(&id, word)?;
        let id_ok = self.equal_in_quotient(&on_id, &expected((a, b))?)?.0;

        let mut shifted = vec![PropOp::Tbeta];
        shifted.extend_from_slice(word);
        let beta_nf = hecke_word_normal_form(k, &shifted, usize::MAX)?;
        let on_beta = self.act_word(&beta, word)?;
        let beta_ok = self.equal_in_quotient(&on_beta, &expected(beta_nf)?)?.0;
        Ok((id_ok, beta_ok))
    }
}
