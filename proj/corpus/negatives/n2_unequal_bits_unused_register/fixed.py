qreg = QuantumRegister(3)
creg = ClassicalRegister(2)
spare = ClassicalRegister(3)
qc = QuantumCircuit(qreg, creg)
qc.h(0)
