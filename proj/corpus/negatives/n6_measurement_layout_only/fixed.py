qc = QuantumCircuit(2, 2)
# prepare
qc.h(0)

qc.measure(0, 0)
qc.measure(0+1, 1)
