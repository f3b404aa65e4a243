qc = QuantumCircuit(2)
helper.h(1)
qc.h(0)
qc.cx(0, 1)
