"""Run the gate-level engine and reconstruct its state from simulated shots.

The circuit realizes each measurement channel by swapping the medium with a
mixed meter qubit and places the two meters in either order with controlled
swaps. The exact statevector is compared with the matrix-level engine, then
8000 shots x 10 repetitions of Pauli tomography are compared with the exact
state.
"""

import numpy as np

from switchengine import engine, qmat
from switchengine.circuit import (conditional_medium_states, engine_circuit, reduced_density,
                                  sample_and_tomograph, statevector_run, to_text)
from switchengine.states import Family, InitialStateSpec, xi_max

be = 1 / 1.65
spec = InitialStateSpec(Family.ENTANGLED, xi=xi_max(be), beta_eps=be)
a = 0.3

c = engine_circuit("coherent", spec, a, 1 - a, 0.0, work_stroke=False)
print(f"{len(c)} gates on {c.width} qubits; first lines of the text form:")
print("".join(to_text(c).splitlines(keepends=True)[:6]))

psi = statevector_run(c)
for (p, rho), br in zip(conditional_medium_states(psi), engine.coherent_branches(a, 1 - a, 0.0, spec)):
    target = np.array([[br.a_bar, br.coherence], [np.conj(br.coherence), 1 - br.a_bar]])
    print(f"outcome {br.outcome.value:>5}: p = {p:.6f} (engine {br.probability:.6f}), "
          f"trace distance {qmat.trace_distance(rho, target):.1e}")

full = engine_circuit("coherent", spec, a, 1 - a, 0.0)
for (p, rho), br in zip(conditional_medium_states(statevector_run(full)),
                        engine.coherent_branches(a, 1 - a, 0.0, spec)):
    print(f"after work stroke, outcome {br.outcome.value:>5}: ground population "
          f"{rho[0, 0].real:.6f}, b = {br.b_strength:.6f}, |coherence| = {abs(rho[0, 1]):.1e}")

truth = reduced_density(psi, (1, 0))
est = sample_and_tomograph(c, 8000, 10, seed=1)
z = np.abs(est.rho_hat - truth) / np.where(est.std_errors > 0, est.std_errors, np.inf)
print(f"\ntomography: max |error| {np.max(np.abs(est.rho_hat - truth)):.4f}, "
      f"max z-score {np.max(z):.2f}")
for shots in (500, 2000, 8000, 32000):
    s = sample_and_tomograph(c, shots, 10, seed=2).std_errors.mean()
    print(f"  shots {shots:>6}: mean std error {s:.5f}   x sqrt(shots) = {s * np.sqrt(shots):.3f}")
