"""Smoke test for the fueltax extension module."""

import fueltax


def close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


sr = fueltax.Model("sr")
cut = sr.tax_cut(20.0)
assert close(cut["d_oil_price"] * 100, 1.194, 0.01), cut
assert close(cut["d_profit_ru"], 11.17, 0.01), cut

lr = fueltax.Model("lr")
amount = lr.equivalent_transfer()
assert amount == 115.0, amount
transfer = lr.transfer(amount)
assert close(transfer["d_profit_ru_yearly"], 132, 0.01), transfer

pair = fueltax.policy_pair("vsr")
assert pair["transfer"]["d_profit_ru_yearly"] is None

steep = fueltax.Model("sr", eps_d_eu=-0.5)
assert steep.params()["eps_d_eu"] == -0.5
try:
    fueltax.Model("sr", x=2.0)
except ValueError as e:
    assert "x" in str(e)
else:
    raise AssertionError("share above one accepted")

again = fueltax.Model.from_dict(sr.params())
assert again.tax_cut() == cut

oracle = sr.oracle(0.1)
assert oracle["gap_oil_price"] < 0.005, oracle

s = fueltax.sweep("vsr")
assert len(s["rows"]) == 32

fit = fueltax.fit_ols([0.0, 1.0, 2.0], [1.0, 2.0, 4.0])
assert close(fit["slope"]["estimate"], 1.5, 1e-12), fit
assert close(fit["slope"]["std_error"], (1 / 12) ** 0.5, 1e-12), fit

ctx = fueltax.context_report(11.0)
assert ctx["soldier_salaries"] == 1466

print("python smoke test passed")
