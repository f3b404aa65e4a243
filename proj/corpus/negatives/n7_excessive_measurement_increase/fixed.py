qreg = QuantumRegister(4)
creg = ClassicalRegister(4)
circ = QuantumCircuit(qreg, creg)
for i in range(4):
    circ.measure(qreg[i], creg[i])
