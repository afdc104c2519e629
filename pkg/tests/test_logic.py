import numpy as np
import pytest

from tlnn.common.errors import FormulaIntervalError, FormulaSyntaxError, FormulaWeightError, HorizonError
from tlnn.extraction import strip_weights
from tlnn.logic import (
    Always,
    And,
    Comparison,
    Eventually,
    Not,
    Or,
    Predicate,
    conjunction,
    conjunction_grad,
    disjunction,
    disjunction_grad,
    eval_boolean,
    format_formula,
    horizon,
    parse_formula,
    robustness_classic,
    robustness_weighted,
)

FAULT_FORMULAS = (
    "F[0,5] G[58,66] (x >= 0.05) & G[14,31] (x < 0.3) & G[45,52] (x < 0.04)",
    "F[60,68] (x < 0.1) & F[44,50] (x >= 0.08) & F[0,5] G[18,30] (x < 0.3)",
    "F[0,5] G[20,25] (x < 0.1) & G[65,72] (x >= 0.3)",
    "F[0,5] G[15,25] (x >= 0.4) | G[0,5] (x >= 0.12)",
)


class TestGrammar:
    """Parsing and printing of formula text"""

    def test_parse_nested_fault_formula(self):
        expected = And((
            Eventually(Always(Predicate(Comparison.LT, 0.1), 20, 25), 0, 5),
            Always(Predicate(Comparison.GE, 0.3), 65, 72),
        ))
        assert parse_formula("F[0,5] G[20,25] (x < 0.1) & G[65,72] (x >= 0.3)") == expected

    def test_single_step_window(self):
        assert parse_formula("G[0,0] (x >= 0)") == Always(Predicate(">=", 0.0), 0, 0)

    def test_reversed_interval_rejected(self):
        with pytest.raises(FormulaIntervalError):
            parse_formula("G[5,3] (x >= 0)")

    def test_syntax_error_position(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula("G[0,2] (x >= )")
        assert info.value.line == 1
        assert info.value.column >= 1

    def test_unexpected_end(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("G[0,2]")

    def test_format_normal_formula(self):
        formula = Or((
            Eventually(Always(Predicate(">=", 0.4), 15, 25), 0, 5),
            Always(Predicate(">=", 0.12), 0, 5),
        ))
        assert format_formula(formula) == "F[0,5] G[15,25] (x >= 0.4) | G[0,5] (x >= 0.12)"

    def test_format_predicate(self):
        assert format_formula(Predicate(">=", 0.05)) == "(x >= 0.05)"

    def test_weight_annotations(self):
        formula = parse_formula("((x >= 0.3){w=2} | G[0,2]{w=1,0.5,1} (x < 1)){w=2,3}")
        assert isinstance(formula, Or)
        assert formula.weights == (2.0, 3.0)
        assert formula.children[0] == Predicate(">=", 0.3, 2.0)
        assert formula.children[1] == Always(Predicate("<", 1.0), 0, 2, (1.0, 0.5, 1.0))

    def test_negative_weight_rejected(self):
        with pytest.raises(FormulaWeightError):
            parse_formula("(x >= 0){w=-1}")

    def test_weight_count_mismatch_rejected(self):
        with pytest.raises(FormulaWeightError):
            parse_formula("G[0,2]{w=1,2} (x >= 0)")

    @pytest.mark.parametrize("text", FAULT_FORMULAS + (
        "!(x >= 0.2) & (F[1,3] (x < 0.5) | (x >= 0.7){w=0.25})",
        "((x >= 0.3) & (x < 0.9)){w=2,0.5} | G[0,1]{w=0.1,3} (x < 0.2)",
        "(F[0,2] (x >= 1) | (x < -1)) & G[0,4] (x >= -2.5)",
    ))
    def test_reparse_of_printed_text(self, text):
        formula = parse_formula(text)
        assert parse_formula(format_formula(formula)) == formula

    def test_random_formulas_reparse(self, make_formula):
        rng = np.random.default_rng(5)
        for _ in range(200):
            formula = make_formula(rng, 3)
            assert parse_formula(format_formula(formula)) == formula

    def test_hide_below_drops_light_children(self):
        formula = And((Predicate(">=", 0.1), Predicate("<", 0.9)), (1.0, 1e-6))
        assert format_formula(formula, hide_below=1e-3) == "(x >= 0.1)"

    def test_horizon(self):
        assert [horizon(parse_formula(text)) for text in FAULT_FORMULAS] == [71, 68, 72, 30]
        assert horizon(Predicate(">=", 0.0)) == 0


class TestSemantics:
    """Boolean, classic and weighted evaluation"""

    signal = np.array([1.0, 2.0, 3.0])

    def test_boolean(self):
        assert eval_boolean(parse_formula("G[0,2] (x >= 0)"), self.signal)
        assert eval_boolean(parse_formula("F[0,2] (x >= 2.5)"), self.signal)
        assert not eval_boolean(parse_formula("G[0,2] (x >= 2.5)"), self.signal)

    def test_classic(self):
        assert robustness_classic(parse_formula("G[0,2] (x >= 0)"), self.signal) == pytest.approx(1.0)
        assert robustness_classic(parse_formula("F[0,2] (x >= 2.5)"), self.signal) == pytest.approx(0.5)
        assert robustness_classic(Predicate(">=", 0.3), [0.3]) == 0.0
        assert robustness_classic(Not(Predicate(">=", 0.3)), [0.5]) == pytest.approx(-0.2)

    def test_weighted_predicate(self):
        assert robustness_weighted(Predicate(">=", 0.3, 2.0), [0.5]) == pytest.approx(0.2)

    def test_weighted_connectives(self):
        both = And((Predicate(">=", 0.0, 2.0), Predicate(">=", 0.0, 2.0)))
        assert robustness_weighted(both, [1.0]) == pytest.approx(1.0)
        either = Or((Predicate(">=", 1.0, 2.0), Predicate(">=", -0.5, 2.0)))
        assert robustness_weighted(either, [0.0]) == pytest.approx(0.25)

    def test_zero_weights_annihilate(self):
        formula = And(
            (Always(Predicate(">=", 0.0, 0.0), 0, 1, (0.0, 0.0)), Predicate("<", 1.0, 0.0)),
            (0.0, 0.0),
        )
        assert robustness_weighted(formula, [0.4, -2.0]) == pytest.approx(0.0)

    def test_horizon_checked(self):
        with pytest.raises(HorizonError):
            robustness_weighted(parse_formula("G[0,5] (x >= 0)"), self.signal)
        with pytest.raises(HorizonError):
            eval_boolean(parse_formula("G[0,1] (x >= 0)"), self.signal, t=2)

    def test_evaluation_offset(self):
        formula = parse_formula("G[0,1] (x >= 1.5)")
        assert not eval_boolean(formula, self.signal, t=0)
        assert eval_boolean(formula, self.signal, t=1)

    def test_weighted_robustness_is_sound(self, make_formula):
        rng = np.random.default_rng(17)
        checked = 0
        for _ in range(500):
            formula = make_formula(rng, 3)
            length = horizon(formula) + 1 + int(rng.integers(0, 3))
            signal = rng.uniform(-1.5, 1.5, length)
            t = int(rng.integers(0, length - horizon(formula)))
            rho = robustness_weighted(formula, signal, t)
            if abs(rho) < 1e-9:
                continue
            assert eval_boolean(formula, signal, t) == (rho > 0)
            checked += 1
        assert checked > 400

    def test_weighted_robustness_is_sound_on_fixed_length_signals(self, make_formula):
        rng = np.random.default_rng(19)
        checked = 0
        for _ in range(1000):
            formula = make_formula(rng, 3)
            signal = rng.uniform(-1.5, 1.5, 32)
            t = int(rng.integers(0, 32 - horizon(formula)))
            rho = robustness_weighted(formula, signal, t)
            if abs(rho) > 1e-9:
                assert eval_boolean(formula, signal, t) == (rho > 0)
                checked += 1
            unit = strip_weights(formula)
            weighted, classic = robustness_weighted(unit, signal, t), robustness_classic(unit, signal, t)
            if abs(weighted) > 1e-9 and abs(classic) > 1e-9:
                assert (weighted > 0) == (classic > 0)
        assert checked > 900

    def test_classic_robustness_is_sound(self, make_formula):
        rng = np.random.default_rng(23)
        for _ in range(300):
            formula = make_formula(rng, 3)
            signal = rng.uniform(-1.5, 1.5, horizon(formula) + 1)
            rho = robustness_classic(formula, signal)
            if abs(rho) > 1e-9:
                assert eval_boolean(formula, signal) == (rho > 0)


class TestActivations:
    """Gate values and their partial derivatives"""

    def test_conjunction_branches(self):
        value, positive = conjunction([1.0, 1.0], [1.0, 1.0])
        assert positive and value == pytest.approx(1.0)
        value, positive = conjunction([1.0, 1.0], [-1.0, 0.5])
        assert not positive and value == pytest.approx(-0.5)

    def test_disjunction_branches(self):
        value, positive = disjunction([1.0, 1.0], [-1.0, 0.5])
        assert positive and value == pytest.approx(0.25)
        value, positive = disjunction([1.0, 1.0, 1.0], [-0.5, -0.5, -0.5])
        assert not positive and value == pytest.approx(-0.5)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            conjunction([1.0], [1.0, 2.0])

    @pytest.mark.parametrize("gate, gate_grad, values", [
        (conjunction, conjunction_grad, [0.4, 1.2, 0.7]),
        (conjunction, conjunction_grad, [0.4, -1.2, 0.7]),
        (disjunction, disjunction_grad, [-0.4, 1.2, 0.7]),
        (disjunction, disjunction_grad, [-0.4, -1.2, -0.7]),
    ])
    def test_gradients_match_finite_differences(self, gate, gate_grad, values):
        weights = np.array([0.8, 1.5, 0.3])
        values = np.array(values)
        _, positive = gate(weights, values)
        dw, dv = gate_grad(weights, values, positive)
        eps = 1e-6
        for i in range(values.size):
            step = np.zeros_like(values)
            step[i] = eps
            fd_v = (gate(weights, values + step)[0] - gate(weights, values - step)[0]) / (2 * eps)
            fd_w = (gate(weights + step, values)[0] - gate(weights - step, values)[0]) / (2 * eps)
            assert dv[i] == pytest.approx(fd_v, abs=1e-6)
            assert dw[i] == pytest.approx(fd_w, abs=1e-6)
