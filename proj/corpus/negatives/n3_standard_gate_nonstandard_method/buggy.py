qc = QuantumCircuit(2)
qc.unitary(op, [0, 1])
qc.cx(0, 1)
