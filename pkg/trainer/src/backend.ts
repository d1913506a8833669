/** Select the fastest available tfjs backend.
 *
 * The wasm backend is an order of magnitude faster than the plain JS cpu
 * backend here, but it ships without the Conv2DBackpropFilter kernel that
 * conv training needs. The filter gradient is itself expressible as a
 * dilated convolution of the (transposed) input with the (transposed)
 * output gradient, so a composed kernel is registered below; everything it
 * calls runs on wasm.
 */
import * as tf from '@tensorflow/tfjs';

function registerConvFilterGradKernel(backendName: string): void {
  if (tf.getKernelsForBackend(backendName).some((k) => k.kernelName === 'Conv2DBackpropFilter')) {
    return;
  }
  tf.registerKernel({
    kernelName: 'Conv2DBackpropFilter',
    backendName,
    kernelFunc: ({ inputs, attrs }) => {
      const a = attrs as unknown as {
        strides: number | [number, number];
        pad: 'same' | 'valid' | number;
        filterShape: [number, number, number, number];
      };
      const [kh, kw] = a.filterShape;
      const s = Array.isArray(a.strides) ? a.strides[0] : a.strides;
      const result = tf.tidy(() => {
        const x = tf.engine().makeTensorFromTensorInfo(inputs.x as tf.TensorInfo) as tf.Tensor4D;
        const dy = tf.engine().makeTensorFromTensorInfo(inputs.dy as tf.TensorInfo) as tf.Tensor4D;
        const [, h, w] = [x.shape[0], x.shape[1], x.shape[2]];
        const [ho, wo] = [dy.shape[1], dy.shape[2]];
        let pt = 0;
        let pl = 0;
        let pb = 0;
        let pr = 0;
        if (a.pad === 'same') {
          const totH = Math.max((ho - 1) * s + kh - h, 0);
          const totW = Math.max((wo - 1) * s + kw - w, 0);
          pt = Math.floor(totH / 2);
          pb = totH - pt;
          pl = Math.floor(totW / 2);
          pr = totW - pl;
        } else if (typeof a.pad === 'number') {
          pt = pl = pb = pr = a.pad;
        }
        const xPad = tf.pad(x, [[0, 0], [pt, pb], [pl, pr], [0, 0]]);
        // dW[a,b,i,o] = sum_{n,u,v} xPad[n, u*s+a, v*s+b, i] * dy[n,u,v,o]:
        // a conv over xPad^T with dy^T as the (dilated) filter
        const xT = tf.transpose(xPad, [3, 1, 2, 0]); // [ci, H', W', n]
        const dyT = tf.transpose(dy, [1, 2, 0, 3]); // [ho, wo, n, co]
        const full = tf.conv2d(xT, dyT as tf.Tensor4D, 1, 'valid', 'NHWC', s);
        const dW = tf.slice(full, [0, 0, 0, 0], [full.shape[0], kh, kw, full.shape[3]]);
        return tf.transpose(dW, [1, 2, 0, 3]); // [kh, kw, ci, co]
      });
      return result;
    },
  });
}

export async function initBackend(): Promise<string> {
  try {
    const wasm = await import('@tensorflow/tfjs-backend-wasm');
    wasm.setThreadsCount(1);
    await tf.setBackend('wasm');
    await tf.ready();
    registerConvFilterGradKernel('wasm');
  } catch {
    await tf.setBackend('cpu');
    await tf.ready();
  }
  return tf.getBackend();
}
