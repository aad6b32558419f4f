//! Every check the harness knows, with the statement it checks.

use serde::Serialize;

use crate::checks::{foundation, infra, invariance, operators, reduction, reverse, table};
use crate::context::{CheckResult, Ctx};
use crate::report::Provenance;

/// Layer a check exercises; checks run in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Field,
    Ring,
    Tree,
    Operators,
    Oracle,
    Harness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Lemma,
    Proposition,
    Theorem,
    Remark,
    Identity,
    TableCell,
    Infrastructure,
}

#[derive(Clone, Copy, Serialize)]
pub struct CheckEntry {
    pub id: &'static str,
    pub kind: Kind,
    pub title: &'static str,
    /// A phrase quoted from the statement being checked.
    pub anchor: &'static str,
    /// Models and balls on which the check applies.
    pub domain: &'static str,
    pub expected: &'static str,
    pub provenance: Provenance,
    pub stage: Stage,
    #[serde(skip)]
    pub run: fn(&Ctx) -> CheckResult,
}

impl std::fmt::Debug for CheckEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckEntry").field("id", &self.id).field("stage", &self.stage).finish()
    }
}

const TABLE_ANCHOR: &str = "Action of $\\mathcal{H}$ on $\\tau^{I(1)}$ for $q>3$";
const TABLE_DOMAIN: &str = "q > 3; n = 2, and n = 3 where the image fits in the ball";

macro_rules! cell {
    ($id:literal, $title:literal, $expected:literal, $run:path) => {
        CheckEntry {
            id: $id,
            kind: Kind::TableCell,
            title: $title,
            anchor: TABLE_ANCHOR,
            domain: TABLE_DOMAIN,
            expected: $expected,
            provenance: Provenance::Stated,
            stage: Stage::Oracle,
            run: $run,
        }
    };
}

pub static CHECKS: &[CheckEntry] = &[
    CheckEntry {
        id: "lemma_functions_are_polynomials",
        kind: Kind::Lemma,
        title: "Functions on digit tuples are reduced polynomials",
        anchor: "comes from a polynomial in $n$ variables with degree in each variable less than or equal to $q - 1$",
        domain: "n <= 3 with q^n <= 729",
        expected: "interpolation and evaluation are mutually inverse",
        provenance: Provenance::Stated,
        stage: Stage::Field,
        run: foundation::functions_are_polynomials,
    },
    CheckEntry {
        id: "infra_codec_roundtrip",
        kind: Kind::Infrastructure,
        title: "Codecs round-trip",
        anchor: "field codes, coset labels, run configuration",
        domain: "all",
        expected: "decode(encode(x)) = x",
        provenance: Provenance::Infrastructure,
        stage: Stage::Field,
        run: foundation::codec_roundtrip,
    },
    CheckEntry {
        id: "infra_carry_oracle",
        kind: Kind::Infrastructure,
        title: "Teichmuller carries match the Witt addition polynomial",
        anchor: "digit 1 of [x] + [y]",
        domain: "all",
        expected: "digit 0 is x + y; digit 1 is the Witt carry (0 when e > 1)",
        provenance: Provenance::Derived,
        stage: Stage::Ring,
        run: foundation::carry_oracle,
    },
    CheckEntry {
        id: "identity_first_digit_carry",
        kind: Kind::Identity,
        title: "I(1) shifts the first digit of a child coset",
        anchor: "where $b_0$ is the $0$-th $\\varpi$-adic digit of $b$ and where $i \\in I(1)$",
        domain: "all",
        expected: "the quotient matrix lies in I(1)",
        provenance: Provenance::Stated,
        stage: Stage::Ring,
        run: foundation::identity_first_digit_carry,
    },
    CheckEntry {
        id: "infra_witness_soundness",
        kind: Kind::Infrastructure,
        title: "Coset reduction witnesses are sound",
        anchor: "rep(label) * witness = g",
        domain: "all",
        expected: "every witness recombines and passes its subgroup predicate",
        provenance: Provenance::Infrastructure,
        stage: Stage::Tree,
        run: foundation::witness_soundness,
    },
    CheckEntry {
        id: "hecke_iwahori_relations",
        kind: Kind::Identity,
        title: "Iwahori-Hecke relations",
        anchor: "$T_{1,0}^2 = \\mathrm{Id}$",
        domain: "ball >= 2",
        expected: "T10^2 = Id, T12 T10 T12 = -T12, Tm10 = T10 T12 T10 on every delta",
        provenance: Provenance::Stated,
        stage: Stage::Operators,
        run: operators::iwahori_relations,
    },
    CheckEntry {
        id: "lemma_l1_image_kernel",
        kind: Kind::Lemma,
        title: "Image of T12 is the kernel of T10 + Tm10",
        anchor: "${\\rm{Im}\\>} T_{1,2} = {\\rm{Ker}\\>}(T_{1,0}+T_{-1,0})$",
        domain: "ball >= 2",
        expected: "both containments, as exact rank equalities",
        provenance: Provenance::Stated,
        stage: Stage::Operators,
        run: operators::l1_image_kernel,
    },
    CheckEntry {
        id: "lemma_direct_sum_decomposition",
        kind: Kind::Lemma,
        title: "Direct sum decomposition of the pro-p induction from IZ",
        anchor: "is $IZ$-equivariant, where $v$ is a basis element of $a^{r - s}d^s$",
        domain: "all",
        expected: "each component map is IZ-equivariant; the components of [id] sum to [id]",
        provenance: Provenance::Stated,
        stage: Stage::Operators,
        run: operators::direct_sum_decomposition,
    },
    CheckEntry {
        id: "lemma_comparison_iwahori_pro_p",
        kind: Kind::Lemma,
        title: "Comparison of Iwahori and pro-p induction",
        anchor: "get mapped to $T_{1, 0}$ and $T_{1, 2}T_{1, 0}$ on the right, respectively",
        domain: "ball >= 3",
        expected: "idempotents sum to Id; T_ns -> T12 T10, T_beta -> T10 on B(1) deltas",
        provenance: Provenance::Stated,
        stage: Stage::Operators,
        run: operators::comparison_iwahori_pro_p,
    },
    CheckEntry {
        id: "lemma_image_t_constant_on_siblings",
        kind: Kind::Lemma,
        title: "Elements of Im T are constant on siblings",
        anchor: "it must have the same value on all vertices of radius $n$ having a common neighbour of radius $n - 1$",
        domain: "ball >= 2",
        expected: "every Im T element supported on a sphere is constant on sibling sets",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: operators::image_t_constant_on_siblings,
    },
    CheckEntry {
        id: "lemma_tnk_reduction",
        kind: Kind::Lemma,
        title: "Reduction of t-like sums",
        anchor: "Then, modulo ${\\rm{Im}\\>} T_{1, 2}$, we have",
        domain: "n <= min(3, ball - 1)",
        expected: "the stated congruence modulo Im T12, by the exact and the search route",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: reduction::tnk_reduction,
    },
    CheckEntry {
        id: "lemma_snk_reduction",
        kind: Kind::Lemma,
        title: "Reduction of s-like sums",
        anchor: "Let $n \\geq 2$ and $0\\leq k \\leq q-1$. Then, modulo $({\\rm{Im}\\>} T_{1, 2}, {\\rm{Ker}\\>} T_{1, 2})$ we have",
        domain: "n = 2..min(3, ball)",
        expected: "both branches in the quotient",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: reduction::snk_reduction,
    },
    CheckEntry {
        id: "remark_t_family",
        kind: Kind::Remark,
        title: "Values of the t family",
        anchor: "we get $t_n^k \\equiv 0 \\mod {\\rm{Im}\\>}T_{1,2}$ for $n\\geq 1$",
        domain: "ball >= 2",
        expected: "t_n^k in Im T12 for k != q - 1; t_1^{q-1} = -[id]; t_2^{q-1} = [beta]",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: reduction::t_family,
    },
    CheckEntry {
        id: "lemma_tn_top_power_vanishes",
        kind: Kind::Lemma,
        title: "The top power of the t family vanishes from n = 3",
        anchor: "For $n \\geq 3$, we have $t_n^{q-1} \\equiv 0$",
        domain: "3 <= n <= ball",
        expected: "t_n^{q-1} = 0 in the quotient",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: reduction::tn_top_power_vanishes,
    },
    CheckEntry {
        id: "lemma_sn0_reduction",
        kind: Kind::Lemma,
        title: "Values of s_n^0",
        anchor: "$s_1^0 \\equiv -\\left[\\beta, 1\\right] \\mod ({\\rm{Im}\\>}T_{1,2}, {\\rm{Ker}\\>}{T_{1,2}})$",
        domain: "n <= min(3, ball)",
        expected: "s_1^0 = -[beta], s_n^0 = 0 for n >= 2",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: reduction::sn0_reduction,
    },
    CheckEntry {
        id: "lemma_snk_not_invariant",
        kind: Kind::Lemma,
        title: "s_n^k is moved when k is not a power of p",
        anchor: "The function $s_n^k$ is not $I(1)$-invariant if $2 \\leq k \\leq q - 1$ and $k$ is not a power of $p$",
        domain: "some 2 <= k < q not a power of p",
        expected: "a complete non-membership for u(-pi^{n-1}) s_n^k - s_n^k",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: reduction::snk_not_invariant,
    },
    CheckEntry {
        id: "remark_s1_not_invariant",
        kind: Kind::Remark,
        title: "s_1^{p^l} is moved",
        anchor: "Therefore $s_1^{p^l}$ is not $I(1)$-invariant",
        domain: "all",
        expected: "u(-1) s_1^{p^l} - s_1^{p^l} = -[beta], a complete non-member",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: reduction::s1_not_invariant,
    },
    CheckEntry {
        id: "lemma_inductive_step",
        kind: Kind::Lemma,
        title: "Invariance propagates outwards",
        anchor: "then $s_n^k$ is also $I(1)$-invariant modulo",
        domain: "ball >= 3, the n = 2 to n = 3 instance",
        expected: "for every k, invariance of s_2^k implies invariance of s_3^k",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: invariance::inductive_step,
    },
    CheckEntry {
        id: "prop_s2_invariance",
        kind: Kind::Proposition,
        title: "s_n^{p^l} is I(1)-invariant",
        anchor: "Assume $ef > 1$ and that $q > 3$. Then, for all $g \\in I(1)$, we have",
        domain: "q > 3 and ef > 1; q <= 3 checks the negative",
        expected: "every difference in the ideal; for q <= 3, s_2^{p^l} provably moved",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: invariance::s_invariance,
    },
    CheckEntry {
        id: "lemma_eigenvalues_of_sn",
        kind: Kind::Lemma,
        title: "Eigencharacter of s_n^{p^l}",
        anchor: "The $I$-eigencharacter of $s_n^{p^l}$ for $n \\geq 2$ and $0 \\leq l \\leq f - 1$ is $(d/a)^{p^l}$",
        domain: "ball >= 2",
        expected: "exact eigenvalue under the torus; only its idempotent survives",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: invariance::eigenvalues_of_sn,
    },
    CheckEntry {
        id: "prop_linear_independence",
        kind: Kind::Proposition,
        title: "The invariant basis is independent",
        anchor: "is linearly independent",
        domain: "q > 3 and ef > 1",
        expected: "full rank modulo the ideal on the ball",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: invariance::linear_independence,
    },
    CheckEntry {
        id: "remark_q3_s31",
        kind: Kind::Remark,
        title: "The q = 2, 3 boundary",
        anchor: "We show that for $q = 3$, the function $s_3^{1}$ is $I(1)$-invariant",
        domain: "q <= 3, ball >= 3",
        expected: "s_2^1 moved by a lower unipotent; s_3^1 fixed for q = 3",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: invariance::q3_s31,
    },
    CheckEntry {
        id: "lemma_invariant_form_top_digit",
        kind: Kind::Lemma,
        title: "Top-digit exponents of invariants (solver cross-check)",
        anchor: "let $f_n \\in \\mathrm{ind}_{IZ}^G\\> \\mathbbm{1}$ be a function of the form $f_n' + f_n''$",
        domain: "n <= min(3, ball) with q^n <= 729",
        expected: "mu_{n-1}-exponents of a_mu are 0 or powers of p",
        provenance: Provenance::Derived,
        stage: Stage::Oracle,
        run: invariance::invariant_form_top_digit,
    },
    CheckEntry {
        id: "lemma_independence_smaller_digits",
        kind: Kind::Lemma,
        title: "Invariants do not depend on smaller digits (solver cross-check)",
        anchor: "be a function of the form $f_n^0 + f_n^1$",
        domain: "2 <= n <= min(3, ball) with q^n <= 729",
        expected: "monomials with a nonzero top exponent involve no smaller digit",
        provenance: Provenance::Derived,
        stage: Stage::Oracle,
        run: invariance::independence_smaller_digits,
    },
    CheckEntry {
        id: "thm_basis_dimension",
        kind: Kind::Theorem,
        title: "Basis of the I(1)-invariants",
        anchor: "A basis for the set of $I(1)$-invariants",
        domain: "q > 3 and ef > 1",
        expected: "solver dimension on B(n) = 2 + f(n - 1) + f(n - 2)",
        provenance: Provenance::Derived,
        stage: Stage::Oracle,
        run: invariance::basis_dimension,
    },
    CheckEntry {
        id: "remark_invariants_growth",
        kind: Kind::Remark,
        title: "The invariants are infinite dimensional",
        anchor: "is infinite dimensional",
        domain: "q > 3 and ef > 1, ball >= 2",
        expected: "strictly growing dimension from radius 1",
        provenance: Provenance::Derived,
        stage: Stage::Oracle,
        run: invariance::invariants_grow,
    },
    CheckEntry {
        id: "thm_endo_algebra",
        kind: Kind::Theorem,
        title: "Endomorphisms are scalars",
        anchor: "The endomorphism algebra ${\\rm End}\\,_G(\\pi_0) = \\overline{\\mathbb{F}}_p$",
        domain: "ball >= 2",
        expected: "[w beta] provably outside the ideal; T12[alpha^-1] = sum of lower cosets",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: operators::endo_algebra_scalars,
    },
    cell!("table_action_Tbeta_id", "T_beta on [id]", "[beta]", table::tbeta_id),
    cell!("table_action_Tbeta_beta", "T_beta on [beta]", "[id]", table::tbeta_beta),
    cell!("table_action_Tbeta_s", "T_beta on s_n^{p^l}", "beta s_n^{p^l}", table::tbeta_s),
    cell!("table_action_Tbeta_beta_s", "T_beta on beta s_n^{p^l}", "s_n^{p^l}", table::tbeta_beta_s),
    cell!("table_action_Tns_id", "T_ns on [id]", "0", table::tns_id),
    cell!("table_action_Tns_beta", "T_ns on [beta]", "-[beta]", table::tns_beta),
    cell!("table_action_Tns_s", "T_ns on s_n^{p^l}", "0", table::tns_s),
    cell!("table_action_Tns_beta_s", "T_ns on beta s_n^{p^l}", "-s_{n+1}^{p^l}", table::tns_beta_s),
    cell!("table_action_e_chi_id", "e_chi on [id]", "[id] for chi = 1, else 0", table::idempotent_id),
    cell!("table_action_e_chi_beta", "e_chi on [beta]", "[beta] for chi = 1, else 0", table::idempotent_beta),
    cell!(
        "table_action_e_chi_s",
        "e_chi on s_n^{p^l}",
        "s_n^{p^l} for chi = (d/a)^{p^l}, else 0",
        table::idempotent_s
    ),
    cell!(
        "table_action_e_chi_beta_s",
        "e_chi on beta s_n^{p^l}",
        "beta s_n^{p^l} for chi = (a/d)^{p^l}, else 0",
        table::idempotent_beta_s
    ),
    CheckEntry {
        id: "remark_generator",
        kind: Kind::Remark,
        title: "One element generates the invariants",
        anchor: "is generated by the element",
        domain: "q > 3 and ef > 1, ball >= 3",
        expected: "idempotent components [id], s_2^{p^l}; the orbit spans the basis",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: table::generator,
    },
    CheckEntry {
        id: "lemma_annihilator",
        kind: Kind::Lemma,
        title: "Annihilator of [id]",
        anchor: "is the right ideal generated by $T_{n_s}, T_{\\beta}(T_{n_s} + 1)$, and $e_{\\chi}$ for $\\chi \\neq \\mathbbm{1}$",
        domain: "q > 3, ball >= 3",
        expected: "the generators kill [id]; words act through their normal forms",
        provenance: Provenance::Stated,
        stage: Stage::Oracle,
        run: table::annihilator,
    },
    CheckEntry {
        id: "thm_summand_reverse_functor",
        kind: Kind::Theorem,
        title: "pi_0 is a summand of the reverse functor (ball level)",
        anchor: "\\simeq \\pi_0 \\oplus M",
        domain: "ball >= 4, max_cutoff >= 2",
        expected: "generators transfer into the ideal; equal quotient ranks on B(2)",
        provenance: Provenance::Derived,
        stage: Stage::Oracle,
        run: reverse::summand_reverse_functor,
    },
    CheckEntry {
        id: "infra_route_agreement",
        kind: Kind::Infrastructure,
        title: "Complete decision agrees with span search",
        anchor: "decide_ideal versus span_search",
        domain: "all",
        expected: "no member found by search is rejected; generator combinations are members",
        provenance: Provenance::Infrastructure,
        stage: Stage::Oracle,
        run: infra::route_agreement,
    },
    CheckEntry {
        id: "infra_report_determinism",
        kind: Kind::Infrastructure,
        title: "Reports are deterministic",
        anchor: "identical config and seed give identical reports",
        domain: "all",
        expected: "byte-identical JSON up to timing; JSON round-trips",
        provenance: Provenance::Infrastructure,
        stage: Stage::Harness,
        run: infra::report_determinism,
    },
];

pub fn find(id: &str) -> Option<&'static CheckEntry> {
    CHECKS.iter().find(|c| c.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn ids_are_unique() {
        let ids: BTreeSet<_> = CHECKS.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), CHECKS.len());
    }

    #[test]
    fn every_table_cell_is_registered() {
        let cells = CHECKS.iter().filter(|c| c.kind == Kind::TableCell).count();
        assert_eq!(cells, 12);
        for column in ["Tbeta", "Tns", "e_chi"] {
            for row in ["id", "beta", "s", "beta_s"] {
                assert!(find(&format!("table_action_{column}_{row}")).is_some());
            }
        }
    }

    #[test]
    fn basis_theorem_anchor() {
        assert_eq!(find("thm_basis_dimension").unwrap().anchor, "A basis for the set of $I(1)$-invariants");
    }
}
