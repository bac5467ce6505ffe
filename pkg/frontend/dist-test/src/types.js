"use strict";
/** JSON wire formats shared with the planning toolchain. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.isLeaf = isLeaf;
exports.targetOrigin = targetOrigin;
function isLeaf(node) {
    return node.cluster !== undefined;
}
function targetOrigin(target) {
    return `${target.scheme}://${target.host}:${target.port}`;
}
