"""Quick check that the qarith extension imports and its main calls work.

Build it first:  pip install --no-build-isolation crates/qarith-py
"""

import cmath

import qarith


def main():
    adder = qarith.build_adder(2)
    assert adder.n_qubits == 6
    # Qubits are cin, b0, a0, b1, a1, cout. A=3, B=2 gives B=1 with carry out.
    assert dict(adder.registers)["A"] == [2, 4]
    assert adder.run_classical("001110") == "011011"

    report = qarith.build_adder(4).lower().metrics("serial")
    assert report["t_count"] == 56 and report["kq_t"] == 240, report
    assert report["garbage_count"] == 0
    assert qarith.predicted("adder", 4)["kq_t"] == 240

    toffoli = qarith.toffoli().lower()
    assert toffoli.metrics()["t_count"] == 7

    u = qarith.build_qft(2).unitary()
    assert abs(u[1][1] - 0.5j) < 1e-12

    qasm = qarith.build_divider(4).to_qasm()
    back = qarith.Circuit.from_qasm(qasm, qarith.build_divider(4).roles_json())
    assert back.to_qasm() == qasm

    psi = qarith.build_qft(2).run_statevector([1, 0, 0, 0])
    assert all(abs(abs(a) - 0.5) < 1e-12 for a in psi)
    counts = dict(qarith.measure(psi, 400, seed=1))
    assert sum(counts.values()) == 400 and counts == dict(qarith.measure(psi, 400, seed=1))

    assert qarith.nonrestoring_reference(7, 2, 4) == (3, 1)
    rows = [[y * 4 + x for x in range(4)] for y in range(4)]
    rotated = qarith.rotate_image(rows, 30.0)
    assert sorted(v for r in rotated for v in r) == list(range(16))

    try:
        qarith.build_qft(3).lower()
    except ValueError as e:
        assert "synthesizable" in str(e)
    else:
        raise AssertionError("expected lowering to fail")

    print("qarith smoke test ok:", adder, cmath.phase(u[1][1]))


if __name__ == "__main__":
    main()
