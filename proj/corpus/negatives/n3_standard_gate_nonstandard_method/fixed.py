qc = QuantumCircuit(2)
qc.initialize(state, [0, 1])
qc.cx(0, 1)
